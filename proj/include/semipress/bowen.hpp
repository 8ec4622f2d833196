#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "semipress/pressure.hpp"

namespace semipress {

struct LyapBounds {
  double alpha = 0.0;  // min_i inf_cloud log a_i
  double beta = 0.0;   // max_i sup_cloud log a_i
  bool warn_nonexpanding = false;
};

LyapBounds lyapunov_bounds_on_cloud(const SemigroupSystem& sys, const SampleCloud& cloud);

// Root s of sum r_i^s = 1 (similarity dimension), to 1e-10.
double moran_dimension(std::span<const double> ratios);

// Occupied grid boxes of size r per scale.
std::vector<std::int64_t> box_counts(const SampleCloud& cloud,
                                     std::span<const double> scales);

// Regression slope of log N(r) against log(1/r) on the given scales; a proxy
// for the Hausdorff dimension of the cloud.
double box_counting_dimension(const SampleCloud& cloud, std::span<const double> scales);

// t* = h / alpha for sets with constant exponent alpha.
double dimension_equal_exponent(double h, double alpha);

// Capacity pressure of -t * log-factor potentials.
double pressure_at_t(const SemigroupSystem& sys, const SampleCloud& cloud, double t,
                     const Schedule& schedule, int threads = 1);

struct BowenResult {
  double t_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<std::pair<double, double>> pressure_trace;  // (t, P(t)), ascending t
  double entropy_value = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> dim_box;
  std::optional<double> dim_moran;
  Flags flags;
};

// Bisection on t of the capacity pressure of -t*Phi_geom, bracketed by
// [h/beta, h/alpha] with slack. Aborts (NaN t_star, flag set) when the cloud
// is non-expanding or the trace fails to decrease.
BowenResult bowen_root(const SemigroupSystem& sys, const SampleCloud& cloud,
                       const Schedule& schedule, double t_tol = 0.01,
                       double p_tol = 0.02, int threads = 1);

struct SlopeCheck {
  bool pass = false;
  double delta_p = 0.0;      // P(t+h) - P(t)
  double lower_bound = 0.0;  // -beta*h
  double upper_bound = 0.0;  // -alpha*h
  double tol = 0.0;
};

// P(t) - beta*h - tol <= P(t+h) <= P(t) - alpha*h + tol.
SlopeCheck prop_slope_check(const SemigroupSystem& sys, const SampleCloud& cloud,
                            const Schedule& schedule, double t, double h_step,
                            double tol = 0.02, int threads = 1);

// Per-(word, eps, N) separated-set log-factor sums, reusable across t > 0:
// the greedy insertion order under -t*log a is t-independent there.
class GeometricProfile {
 public:
  GeometricProfile(const SemigroupSystem& sys, const SampleCloud& cloud,
                   const Schedule& schedule, int threads = 1);

  // Same value as capacity_pressure with potentials ScaledLogFactor(-t),
  // separated variant, for t > 0.
  PressureEstimate estimate_at(double t) const;
  const Schedule& schedule() const { return schedule_; }

 private:
  struct Cell {
    int word_length;
    double epsilon;
    std::int64_t n_words;
    bool exhaustive;
    bool resolved;
    std::vector<std::vector<double>> word_logsums;  // per word: L at selected points
  };
  Schedule schedule_;
  double consistency_tol_;
  std::vector<Cell> cells_;  // eps-major, then N
  std::size_t n_eps_ = 0;
  std::size_t n_len_ = 0;
};

}  // namespace semipress
