#include "semipress/skew.hpp"

#include <cmath>
#include <stdexcept>

#include "semipress/kernel.hpp"

namespace semipress {

SkewPoint skew_apply(const SemigroupSystem& sys, const SkewPoint& p) {
  if (!p.window.covers(0))
    throw std::runtime_error("skew_apply: window exhausted (index 0 not covered)");
  const Symbol s = p.window.at(0);
  if (s >= sys.m()) throw std::out_of_range("skew_apply: window symbol out of range");
  SkewPoint next{OmegaWindow(p.window.start - 1, p.window.symbols),
                 apply_generator(sys, s, p.x)};
  return next;
}

double skew_birkhoff(const SemigroupSystem& sys, const SkewPotential& g,
                     const SkewPoint& p, int n) {
  if (n < 1) throw std::invalid_argument("skew_birkhoff: n must be >= 1");
  if (!p.window.covers(0) || !p.window.covers(n - 1))
    throw std::invalid_argument("skew_birkhoff: window does not cover [0, n-1]");
  std::vector<Symbol> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = p.window.at(k);
  const PotentialFamily family = family_of(g.phi, sys.m());
  return n * g.c + birkhoff_sum(sys, family, w, p.x);
}

SkewEstimate skew_capacity_pressure(const SemigroupSystem& sys, const SkewPotential& g,
                                    const SampleCloud& cloud, const Schedule& schedule,
                                    bool one_sided, int threads) {
  validate(schedule);
  if (schedule.word_lengths.size() < 3)
    throw std::invalid_argument("skew_capacity_pressure: need at least 3 word lengths");
  const PotentialFamily family = family_of(g.phi, sys.m());
  const double log_m = std::log(static_cast<double>(sys.m()));

  SkewEstimate out;
  std::vector<PartitionCell> rows;
  std::vector<EpsilonFit> fits;
  bool exhaustive = true;

  for (double eps : schedule.epsilons) {
    if (eps > 0.5)
      throw std::invalid_argument("skew_capacity_pressure: eps must be <= 1/2");
    // d'(omega, omega') >= eps iff the sequences differ within K indices of
    // the orbit window, eps = 2^-K.
    const int K = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps))));
    const double sep_mult = one_sided ? (K + 1) * log_m : (2 * K + 1) * log_m;
    const double span_mult = one_sided ? K * log_m : (2 * K - 1) * log_m;

    Eigen::ArrayXd xs(static_cast<Eigen::Index>(schedule.word_lengths.size()));
    Eigen::ArrayXd ys(xs.size());
    bool eps_resolved = true;
    for (std::size_t k = 0; k < schedule.word_lengths.size(); ++k) {
      const int n = schedule.word_lengths[k];
      const AveragedPartition sep = averaged_partition(sys, family, cloud, n, eps,
                                                       schedule, SumVariant::separated,
                                                       threads);
      const AveragedPartition span = averaged_partition(sys, family, cloud, n, eps,
                                                        schedule, SumVariant::spanning,
                                                        threads);
      exhaustive = exhaustive && sep.exhaustive;
      eps_resolved = eps_resolved && sep.resolved;

      SkewCell cell;
      cell.word_length = n;
      cell.epsilon = eps;
      cell.window_k = K;
      cell.sep_multiplicity = std::exp(sep_mult);
      cell.span_multiplicity = std::exp(span_mult);
      cell.log_fiber_sep_sum = n * log_m + std::log(sep.mean);
      cell.log_fiber_span_sum = n * log_m + std::log(span.mean);
      cell.log_skew_sep_sum = n * g.c + sep_mult + cell.log_fiber_sep_sum;
      cell.log_skew_span_sum = n * g.c + span_mult + cell.log_fiber_span_sum;
      // Lemma-style bounds as computed: the separated product sum dominates
      // e^{nc} m^n P, the spanning one is within K(eps) of e^{nc} m^n Q.
      const double lower_gap = cell.log_skew_sep_sum - (n * g.c + cell.log_fiber_sep_sum);
      const double upper_gap =
          (n * g.c + span_mult + cell.log_fiber_span_sum) - cell.log_skew_span_sum;
      cell.sandwich_holds = lower_gap >= -1e-12 && upper_gap >= -1e-12;
      out.cells.push_back(cell);

      PartitionCell row;
      row.variant = "skew_separated";
      row.word_length = n;
      row.epsilon = eps;
      row.n_words = sep.n_words;
      row.log_avg_sum = cell.log_skew_sep_sum;
      row.stderr_ = sep.mean > 0 ? sep.stderr_ / sep.mean : 0.0;
      row.resolved = sep.resolved;
      rows.push_back(row);
      xs[static_cast<Eigen::Index>(k)] = n;
      ys[static_cast<Eigen::Index>(k)] = cell.log_skew_sep_sum;
    }
    fits.push_back(EpsilonFit{eps, fit_line(xs, ys), eps_resolved});
  }
  out.estimate = assemble_pressure_estimate(rows, fits, exhaustive, schedule.consistency_tol);
  return out;
}

SkewIdentityReport verify_theorem_identity(const SemigroupSystem& sys,
                                           const Potential& phi, double c,
                                           const SampleCloud& cloud,
                                           const Schedule& schedule, double tol,
                                           bool one_sided, int threads) {
  SkewIdentityReport rep;
  rep.c = c;
  rep.tol = tol;
  const SkewEstimate skew =
      skew_capacity_pressure(sys, SkewPotential{c, phi}, cloud, schedule, one_sided, threads);
  const PotentialFamily family = family_of(phi, sys.m());
  const PressureEstimate fiber =
      capacity_pressure(sys, family, cloud, schedule, SumVariant::separated, threads);
  rep.lhs = skew.estimate.value;
  rep.rhs = std::log(static_cast<double>(sys.m())) + fiber.value + c;
  rep.cells = skew.cells;
  for (const SkewCell& cell : skew.cells)
    rep.sandwich_all_cells = rep.sandwich_all_cells && cell.sandwich_holds;
  rep.pass = std::abs(rep.lhs - rep.rhs) <= tol && rep.sandwich_all_cells;
  rep.flags.merge(skew.estimate.flags);
  rep.flags.merge(fiber.flags);
  return rep;
}

}  // namespace semipress
