#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace semipress {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;       // RMS residual
  double local_slope_min = 0.0;  // min/max of consecutive two-point slopes
  double local_slope_max = 0.0;
};

// Least-squares line through (x_i, y_i), plus the spread of local slopes.
inline LineFit fit_line(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  const auto n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  const double xm = x.mean();
  const double ym = y.mean();
  const double sxx = ((x - xm) * (x - xm)).sum();
  if (sxx <= 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = ((x - xm) * (y - ym)).sum() / sxx;
  f.intercept = ym - f.slope * xm;
  const Eigen::ArrayXd r = y - (f.slope * x + f.intercept);
  f.residual = std::sqrt((r * r).mean());
  f.local_slope_min = std::numeric_limits<double>::infinity();
  f.local_slope_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double s = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    f.local_slope_min = std::min(f.local_slope_min, s);
    f.local_slope_max = std::max(f.local_slope_max, s);
  }
  return f;
}

}  // namespace semipress
