#include "semipress/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace semipress {

std::vector<double> orbit_segment(const SemigroupSystem& sys, std::span<const Symbol> w,
                                  double x) {
  std::vector<double> pts;
  pts.reserve(w.size() + 1);
  pts.push_back(x);
  for (Symbol s : w) pts.push_back(apply_generator(sys, s, pts.back()));
  return pts;
}

double birkhoff_sum(const SemigroupSystem& sys, const PotentialFamily& family,
                    std::span<const Symbol> w, double x) {
  double sum = 0.0;
  double p = x;
  for (Symbol s : w) {
    sum += potential_value(sys, family, s, p);
    p = apply_generator(sys, s, p);
  }
  return sum;
}

double birkhoff_sum(const SemigroupSystem& sys, std::span<const Symbol> w, double x) {
  return birkhoff_sum(sys, sys.potentials, w, x);
}

double bowen_distance(const SemigroupSystem& sys, std::span<const Symbol> w, double x,
                      double y) {
  double d = base_distance(sys, x, y);
  double px = x, py = y;
  for (Symbol s : w) {
    px = apply_generator(sys, s, px);
    py = apply_generator(sys, s, py);
    d = std::max(d, base_distance(sys, px, py));
  }
  return d;
}

bool in_bowen_ball(const SemigroupSystem& sys, std::span<const Symbol> w, double x,
                   double delta, double y) {
  if (base_distance(sys, x, y) > delta) return false;
  double px = x, py = y;
  for (Symbol s : w) {
    px = apply_generator(sys, s, px);
    py = apply_generator(sys, s, py);
    if (base_distance(sys, px, py) > delta) return false;
  }
  return true;
}

bool bowen_distance_at_least(const SemigroupSystem& sys, std::span<const Symbol> w,
                             double x, double y, double bound) {
  if (base_distance(sys, x, y) >= bound) return true;
  double px = x, py = y;
  for (Symbol s : w) {
    px = apply_generator(sys, s, px);
    py = apply_generator(sys, s, py);
    if (base_distance(sys, px, py) >= bound) return true;
  }
  return false;
}

Eigen::ArrayXXd orbit_matrix(const SemigroupSystem& sys, std::span<const Symbol> w,
                             const Eigen::ArrayXd& points) {
  const auto n = points.size();
  Eigen::ArrayXXd orbits(static_cast<Eigen::Index>(w.size()) + 1, n);
  orbits.row(0) = points.transpose();
  Eigen::ArrayXd current = points;
  for (std::size_t k = 0; k < w.size(); ++k) {
    apply_generator_inplace(sys, w[k], current);
    orbits.row(static_cast<Eigen::Index>(k) + 1) = current.transpose();
  }
  return orbits;
}

Eigen::ArrayXd birkhoff_sums(const SemigroupSystem& sys, const PotentialFamily& family,
                             std::span<const Symbol> w, const Eigen::ArrayXd& points) {
  Eigen::ArrayXd sums = Eigen::ArrayXd::Zero(points.size());
  Eigen::ArrayXd current = points;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const int i = w[k];
    const auto& phi = family[static_cast<std::size_t>(i)];
    if (const auto* c = std::get_if<Constant>(&phi)) {
      sums += c->value;
    } else if (const auto* slf = std::get_if<ScaledLogFactor>(&phi)) {
      const auto& f = sys.maps[static_cast<std::size_t>(i)];
      if (const auto* lin = std::get_if<LinearMod1>(&f)) {
        sums += slf->coefficient * std::log(static_cast<double>(lin->slope));
      } else {
        for (Eigen::Index j = 0; j < current.size(); ++j)
          sums[j] += slf->coefficient * std::log(map_factor(f, current[j]));
      }
    }
    if (k + 1 < w.size()) apply_generator_inplace(sys, i, current);
  }
  return sums;
}

double column_bowen_distance(const SemigroupSystem& sys, const Eigen::ArrayXXd& orbits,
                             Eigen::Index j, Eigen::Index k) {
  const bool circle = sys.metric == MetricMode::circle;
  double d = 0.0;
  for (Eigen::Index r = 0; r < orbits.rows(); ++r) {
    const double step = circle ? circle_distance(orbits(r, j), orbits(r, k))
                               : std::abs(orbits(r, j) - orbits(r, k));
    d = std::max(d, step);
  }
  return d;
}

bool column_distance_at_least(const SemigroupSystem& sys, const Eigen::ArrayXXd& orbits,
                              Eigen::Index j, Eigen::Index k, double bound) {
  const bool circle = sys.metric == MetricMode::circle;
  for (Eigen::Index r = 0; r < orbits.rows(); ++r) {
    const double step = circle ? circle_distance(orbits(r, j), orbits(r, k))
                               : std::abs(orbits(r, j) - orbits(r, k));
    if (step >= bound) return true;
  }
  return false;
}

}  // namespace semipress
