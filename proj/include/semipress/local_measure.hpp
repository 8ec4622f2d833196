#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "semipress/flags.hpp"
#include "semipress/pressure.hpp"

namespace semipress {

struct LebesgueCircle {};

struct EmpiricalOrbit {
  std::vector<double> atoms;
};

// Product measure on the cylinders of a piecewise-affine base map; weight of
// a depth-k cylinder is the product of its branch weights.
struct BernoulliCylinder {
  ConformalMap base;
  std::vector<double> weights;  // one per branch, summing to 1
  int depth_cap = 40;
};

struct MeasureModel {
  std::variant<LebesgueCircle, EmpiricalOrbit, BernoulliCylinder> kind;
  std::int64_t sample_budget = 1'000'000;  // >= 1000
  std::uint64_t seed = 0;
};

MeasureModel lebesgue_measure(std::int64_t sample_budget = 1'000'000,
                              std::uint64_t seed = 0);

struct MassResult {
  double mass = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;  // 0 when exact
  Flags flags;
};

// mu(B_w(x, r)). Lebesgue: Monte-Carlo over the base window [x-r, x+r]
// (everything outside fails the first Bowen constraint), sampled in chunks
// until ~100 hits or the budget is reached. Empirical: exact atom fraction.
// Bernoulli: exact weight of the ball arc.
MassResult bowen_ball_mass(const MeasureModel& mu, const SemigroupSystem& sys,
                           std::span<const Symbol> w, double x, double r);

struct LocalCell {
  int horizon = 0;
  double radius = 0.0;
  double lower = 0.0;  // -(1/n) max_w { log mu(B_w(x,r)) - S_w Phi(x) }
  double upper = 0.0;  // same with min_w
  std::int64_t words = 0;
  Flags flags;
};

struct LocalPressureReport {
  double x = 0.0;
  std::vector<LocalCell> cells;  // radius-major (descending), horizon ascending
  double lower_value = 0.0;      // at largest surviving horizon, smallest resolved radius
  double upper_value = 0.0;
  Flags flags;
};

// Exact max/min over all words per horizon (m^n within word_budget); zero-mass
// cells truncate the horizon list for their radius.
LocalPressureReport local_pressure(const MeasureModel& mu, const SemigroupSystem& sys,
                                   const PotentialFamily& family, double x,
                                   const std::vector<int>& horizons,
                                   const std::vector<double>& radii,
                                   std::uint64_t word_budget = std::uint64_t{1} << 14);

struct SandwichReport {
  double inf_lower = 0.0;
  double sup_upper = 0.0;
  double pressure = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::vector<double> points;
  Flags flags;
};

// inf_x lower - tol <= caratheodory pressure <= sup_x upper + tol over
// n_points quantile-spaced cloud points.
SandwichReport sandwich_check(const MeasureModel& mu, const SemigroupSystem& sys,
                              const PotentialFamily& family, const SampleCloud& cloud,
                              const Schedule& schedule, const std::vector<int>& horizons,
                              const std::vector<double>& radii, int n_points, double tol,
                              int threads = 1);

}  // namespace semipress
