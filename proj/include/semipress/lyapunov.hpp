#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "semipress/flags.hpp"
#include "semipress/systems.hpp"

namespace semipress {

// lambda_w(x) = S_w(log a)(x) / |w|.
double lyapunov_word(const SemigroupSystem& sys, std::span<const Symbol> w, double x);

struct EnvelopePoint {
  int n = 0;
  double min_lambda = 0.0;
  double max_lambda = 0.0;
  std::int64_t words = 0;
  bool exhaustive = true;
};

// Per-length min/max of lambda_w(x) over |w| = n <= n_max; exhaustive while
// m^n <= word_budget, otherwise a seeded sample.
std::vector<EnvelopePoint> lyapunov_envelope(const SemigroupSystem& sys, double x,
                                             int n_max, std::uint64_t word_budget,
                                             std::uint64_t seed);

// Finite-horizon value of inf over words |w| <= n_max and prefixes w' of w
// (empty and full included) of S_w(log a)(x) - S_{w'}(log a)(x) + |w| eps.
// Exhaustive; m^n_max must stay within the budget.
double tempered_margin(const SemigroupSystem& sys, double x, double eps, int n_max,
                       std::uint64_t word_budget = std::uint64_t{1} << 22);

struct LyapunovReport {
  double x = 0.0;
  int n_max = 0;
  double tau = 0.0;
  double m_cap = 0.0;
  std::vector<EnvelopePoint> envelope;
  std::vector<std::pair<double, double>> tempered_margins;  // (eps, margin)
  bool in_A_positive = false;
  bool in_B = false;
  bool in_A_interval = false;
  std::optional<std::pair<double, double>> interval_E;
  Flags flags;
};

// Finite-horizon surrogate classification against A(E) and B; horizons and
// thresholds are recorded in the report, membership is never asserted exactly.
// in_B is certified analytically when every factor is >= 1.
LyapunovReport classify_point(const SemigroupSystem& sys, double x, int n_max, double tau,
                              std::optional<std::pair<double, double>> interval_E =
                                  std::nullopt,
                              std::vector<double> margin_epsilons = {0.1, 0.05},
                              double m_cap = 20.0,
                              std::uint64_t word_budget = std::uint64_t{1} << 22);

}  // namespace semipress
