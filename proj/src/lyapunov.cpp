#include "semipress/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "semipress/kernel.hpp"
#include "semipress/rng.hpp"
#include "semipress/words.hpp"

namespace semipress {

namespace {

PotentialFamily log_factor_family(const SemigroupSystem& sys) {
  return family_of(ScaledLogFactor{1.0}, sys.m());
}

// Depth-first walk over all words up to depth n_max, carrying the orbit point
// and the running log-factor sum; visit(depth, sum, running_max_prefix) is
// called at every node of depth >= 1.
template <typename Visit>
void walk_words(const SemigroupSystem& sys, double x, int n_max, const Visit& visit) {
  struct Frame {
    double point;
    double sum;
    double max_prefix;  // max over prefix sums (empty prefix = 0 included)
    int depth;
    int next_symbol;
  };
  std::vector<Frame> stack;
  stack.push_back({x, 0.0, 0.0, 0, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.depth == n_max || f.next_symbol == sys.m()) {
      stack.pop_back();
      continue;
    }
    const int s = f.next_symbol++;
    const double step = std::log(factor(sys, s, f.point));
    const double sum = f.sum + step;
    const double max_prefix = std::max(f.max_prefix, sum);
    const double next_point = apply_generator(sys, s, f.point);
    visit(f.depth + 1, sum, max_prefix);
    stack.push_back({next_point, sum, max_prefix, f.depth + 1, 0});
  }
}

}  // namespace

double lyapunov_word(const SemigroupSystem& sys, std::span<const Symbol> w, double x) {
  if (w.empty()) throw std::invalid_argument("lyapunov_word: empty word");
  const PotentialFamily fam = log_factor_family(sys);
  return birkhoff_sum(sys, fam, w, x) / static_cast<double>(w.size());
}

std::vector<EnvelopePoint> lyapunov_envelope(const SemigroupSystem& sys, double x,
                                             int n_max, std::uint64_t word_budget,
                                             std::uint64_t seed) {
  if (n_max < 1) throw std::invalid_argument("lyapunov_envelope: n_max must be >= 1");
  std::vector<EnvelopePoint> env(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    env[static_cast<std::size_t>(n - 1)] = {n, std::numeric_limits<double>::infinity(),
                                            -std::numeric_limits<double>::infinity(), 0,
                                            true};
  }
  const auto total = word_count(sys.alphabet, n_max);
  if (total && *total <= word_budget) {
    walk_words(sys, x, n_max, [&](int depth, double sum, double) {
      auto& e = env[static_cast<std::size_t>(depth - 1)];
      const double lambda = sum / depth;
      e.min_lambda = std::min(e.min_lambda, lambda);
      e.max_lambda = std::max(e.max_lambda, lambda);
      e.words += 1;
    });
    return env;
  }
  // Sampled envelope: n_max-long words drawn uniformly; their prefixes feed
  // every shorter length, keeping per-length extremes consistent.
  const int k = static_cast<int>(std::min<std::uint64_t>(word_budget, 4096));
  const auto words = sample_words(sys.alphabet, n_max, k, seed);
  for (const Word& w : words) {
    double point = x;
    double sum = 0.0;
    for (int d = 1; d <= n_max; ++d) {
      const int s = w[d - 1];
      sum += std::log(factor(sys, s, point));
      point = apply_generator(sys, s, point);
      auto& e = env[static_cast<std::size_t>(d - 1)];
      const double lambda = sum / d;
      e.min_lambda = std::min(e.min_lambda, lambda);
      e.max_lambda = std::max(e.max_lambda, lambda);
      e.words += 1;
      e.exhaustive = false;
    }
  }
  return env;
}

double tempered_margin(const SemigroupSystem& sys, double x, double eps, int n_max,
                       std::uint64_t word_budget) {
  if (!(eps > 0.0)) throw std::invalid_argument("tempered_margin: eps must be > 0");
  if (n_max < 1) throw std::invalid_argument("tempered_margin: n_max must be >= 1");
  const auto total = word_count(sys.alphabet, n_max);
  if (!total || *total > word_budget)
    throw std::invalid_argument("tempered_margin: m^n_max exceeds the word budget");
  double margin = std::numeric_limits<double>::infinity();
  // Per word, the min over prefixes w' of S_w - S_{w'} is S_w minus the
  // largest prefix sum (empty prefix contributes 0).
  walk_words(sys, x, n_max, [&](int depth, double sum, double max_prefix) {
    margin = std::min(margin, sum - max_prefix + depth * eps);
  });
  return margin;
}

LyapunovReport classify_point(const SemigroupSystem& sys, double x, int n_max, double tau,
                              std::optional<std::pair<double, double>> interval_E,
                              std::vector<double> margin_epsilons, double m_cap,
                              std::uint64_t word_budget) {
  if (!(tau > 0.0)) throw std::invalid_argument("classify_point: tau must be > 0");
  LyapunovReport rep;
  rep.x = x;
  rep.n_max = n_max;
  rep.tau = tau;
  rep.m_cap = m_cap;
  rep.interval_E = interval_E;
  rep.envelope = lyapunov_envelope(sys, x, n_max, word_budget, /*seed=*/0);
  const EnvelopePoint& last = rep.envelope.back();
  rep.in_A_positive = last.min_lambda > tau;
  if (interval_E) {
    rep.in_A_interval = last.min_lambda >= interval_E->first - tau &&
                        last.max_lambda <= interval_E->second + tau;
  }
  std::sort(margin_epsilons.begin(), margin_epsilons.end(), std::greater<>());
  bool in_b = true;
  for (double eps : margin_epsilons) {
    const double margin = tempered_margin(sys, x, eps, n_max, word_budget);
    rep.tempered_margins.emplace_back(eps, margin);
    in_b = in_b && margin >= -m_cap;
  }
  rep.in_B = in_b || factors_at_least_one(sys);
  return rep;
}

}  // namespace semipress
