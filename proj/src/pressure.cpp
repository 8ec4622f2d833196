#include "semipress/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "semipress/detail/search.hpp"
#include "semipress/kernel.hpp"
#include "semipress/parallel.hpp"
#include "semipress/rng.hpp"

namespace semipress {

namespace {

std::uint64_t double_bits(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof(b));
  return b;
}

double max_log_factor_on_cloud(const SemigroupSystem& sys, const SampleCloud& cloud) {
  double beta = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < sys.m(); ++i) {
    const auto& f = sys.maps[static_cast<std::size_t>(i)];
    if (const auto* lin = std::get_if<LinearMod1>(&f)) {
      beta = std::max(beta, std::log(static_cast<double>(lin->slope)));
      continue;
    }
    for (Eigen::Index j = 0; j < cloud.size(); ++j)
      beta = std::max(beta, std::log(map_factor(f, cloud.points[j])));
  }
  return beta;
}

struct WordSource {
  const SemigroupSystem& sys;
  int n;
  bool exhaustive;
  std::int64_t count;
  std::vector<Word> samples;  // monte-carlo mode only

  void symbols_for(std::int64_t i, std::vector<Symbol>& buf) const {
    if (exhaustive) {
      word_at(sys.alphabet, n, static_cast<std::uint64_t>(i), buf);
    } else {
      buf = samples[static_cast<std::size_t>(i)].symbols();
    }
  }
};

WordSource make_word_source(const SemigroupSystem& sys, int n, const Schedule& schedule,
                            std::uint64_t salt) {
  const auto count = word_count(sys.alphabet, n);
  if (count && *count <= schedule.word_budget) {
    return WordSource{sys, n, true, static_cast<std::int64_t>(*count), {}};
  }
  auto samples = sample_words(sys.alphabet, n, schedule.mc_samples,
                              mix_seed(schedule.seed, static_cast<std::uint64_t>(n), salt));
  return WordSource{sys, n, false, schedule.mc_samples, std::move(samples)};
}

}  // namespace

void validate(const Schedule& schedule) {
  if (schedule.word_lengths.empty()) throw std::invalid_argument("Schedule: no word lengths");
  int prev = 1;
  for (int n : schedule.word_lengths) {
    if (n < 2) throw std::invalid_argument("Schedule: word lengths must be >= 2");
    if (n <= prev && prev != 1) throw std::invalid_argument("Schedule: word lengths must ascend");
    prev = n;
  }
  if (schedule.epsilons.empty()) throw std::invalid_argument("Schedule: no epsilons");
  double last = std::numeric_limits<double>::infinity();
  for (double e : schedule.epsilons) {
    if (!(e > 0.0)) throw std::invalid_argument("Schedule: epsilons must be > 0");
    if (e >= last) throw std::invalid_argument("Schedule: epsilons must descend");
    last = e;
  }
  if (schedule.mc_samples < 1) throw std::invalid_argument("Schedule: mc_samples must be >= 1");
}

const char* variant_name(SumVariant v) {
  return v == SumVariant::spanning ? "spanning" : "separated";
}

WordPartitionSum partition_sum_spanning(const SemigroupSystem& sys,
                                        const PotentialFamily& family,
                                        const SampleCloud& cloud,
                                        std::span<const Symbol> w, double eps) {
  const WordSets ws = build_word_sets(sys, family, w, cloud, eps, true);
  return WordPartitionSum{ws.spanning_sum, static_cast<int>(ws.spanning.size()),
                          ws.spanning_is_separated_fallback};
}

WordPartitionSum partition_sum_separated(const SemigroupSystem& sys,
                                         const PotentialFamily& family,
                                         const SampleCloud& cloud,
                                         std::span<const Symbol> w, double eps) {
  const WordSets ws = build_word_sets(sys, family, w, cloud, eps, false);
  return WordPartitionSum{ws.separated_sum, static_cast<int>(ws.separated.size()), false};
}

bool cell_resolved(const SemigroupSystem& sys, const SampleCloud& cloud, int n,
                   double eps) {
  const double beta = max_log_factor_on_cloud(sys, cloud);
  return cloud.resolution <= 0.5 * eps * std::exp(-static_cast<double>(n) * beta);
}

CellSums cell_word_sums(const SemigroupSystem& sys, const PotentialFamily& family,
                        const SampleCloud& cloud, int n, double eps,
                        const Schedule& schedule, SumVariant variant, int threads) {
  if (family.size() != static_cast<std::size_t>(sys.m()))
    throw std::invalid_argument("cell_word_sums: potential family size mismatch");
  const std::uint64_t salt =
      mix_seed(double_bits(eps), variant == SumVariant::spanning ? 1 : 2);
  const WordSource source = make_word_source(sys, n, schedule, salt);
  CellSums out;
  out.exhaustive = source.exhaustive;
  out.n_words = source.count;
  out.values.resize(static_cast<std::size_t>(source.count));
  out.sizes.resize(static_cast<std::size_t>(source.count));
  parallel_for(source.count, threads, [&](std::int64_t i) {
    std::vector<Symbol> buf;
    source.symbols_for(i, buf);
    const bool span = variant == SumVariant::spanning;
    const WordSets ws = build_word_sets(sys, family, buf, cloud, eps, span);
    out.values[static_cast<std::size_t>(i)] = span ? ws.spanning_sum : ws.separated_sum;
    out.sizes[static_cast<std::size_t>(i)] =
        static_cast<int>((span ? ws.spanning : ws.separated).size());
  });
  return out;
}

AveragedPartition averaged_partition(const SemigroupSystem& sys,
                                     const PotentialFamily& family,
                                     const SampleCloud& cloud, int n, double eps,
                                     const Schedule& schedule, SumVariant variant,
                                     int threads) {
  const CellSums sums = cell_word_sums(sys, family, cloud, n, eps, schedule, variant, threads);
  AveragedPartition out;
  out.n_words = sums.n_words;
  out.exhaustive = sums.exhaustive;
  out.resolved = cell_resolved(sys, cloud, n, eps);
  long double acc = 0.0L;
  for (double v : sums.values) acc += v;
  out.mean = static_cast<double>(acc / static_cast<long double>(sums.n_words));
  if (!sums.exhaustive && sums.n_words > 1) {
    long double ss = 0.0L;
    for (double v : sums.values) {
      const long double d = v - out.mean;
      ss += d * d;
    }
    const auto k = static_cast<long double>(sums.n_words);
    out.stderr_ = static_cast<double>(std::sqrt(static_cast<double>(ss / (k - 1) / k)));
  }
  return out;
}

PressureEstimate assemble_pressure_estimate(const std::vector<PartitionCell>& cells,
                                            const std::vector<EpsilonFit>& fits,
                                            bool exhaustive, double consistency_tol) {
  PressureEstimate est;
  est.per_cell = cells;
  est.fits = fits;
  est.mode = exhaustive ? "exhaustive" : "monte_carlo";
  if (!exhaustive) est.flags.set(Flag::monte_carlo);

  // Smallest resolved epsilon (fits are ordered by descending epsilon).
  int chosen = -1;
  for (int i = 0; i < static_cast<int>(fits.size()); ++i)
    if (fits[static_cast<std::size_t>(i)].resolved) chosen = i;
  if (chosen < 0) {
    chosen = 0;
    est.flags.set(Flag::unresolved);
  }
  est.value = fits[static_cast<std::size_t>(chosen)].fit.slope;

  // Consistency across the two smallest resolved scales.
  int prev = -1;
  for (int i = 0; i < chosen; ++i)
    if (fits[static_cast<std::size_t>(i)].resolved) prev = i;
  if (prev >= 0) {
    const double diff = std::abs(fits[static_cast<std::size_t>(prev)].fit.slope -
                                 fits[static_cast<std::size_t>(chosen)].fit.slope);
    if (diff > consistency_tol) est.flags.set(Flag::nonmonotone);
  }
  return est;
}

PressureEstimate capacity_pressure(const SemigroupSystem& sys,
                                   const PotentialFamily& family,
                                   const SampleCloud& cloud, const Schedule& schedule,
                                   SumVariant variant, int threads) {
  validate(schedule);
  if (schedule.word_lengths.size() < 3)
    throw std::invalid_argument("capacity_pressure: need at least 3 word lengths");
  std::vector<PartitionCell> cells;
  std::vector<EpsilonFit> fits;
  bool exhaustive = true;
  for (double eps : schedule.epsilons) {
    Eigen::ArrayXd xs(static_cast<Eigen::Index>(schedule.word_lengths.size()));
    Eigen::ArrayXd ys(xs.size());
    bool eps_resolved = true;
    for (std::size_t k = 0; k < schedule.word_lengths.size(); ++k) {
      const int n = schedule.word_lengths[k];
      const AveragedPartition ap =
          averaged_partition(sys, family, cloud, n, eps, schedule, variant, threads);
      exhaustive = exhaustive && ap.exhaustive;
      eps_resolved = eps_resolved && ap.resolved;
      PartitionCell cell;
      cell.variant = variant_name(variant);
      cell.word_length = n;
      cell.epsilon = eps;
      cell.n_words = ap.n_words;
      cell.log_avg_sum = std::log(ap.mean);
      cell.stderr_ = ap.mean > 0 ? ap.stderr_ / ap.mean : 0.0;
      cell.resolved = ap.resolved;
      cells.push_back(cell);
      xs[static_cast<Eigen::Index>(k)] = n;
      ys[static_cast<Eigen::Index>(k)] = cell.log_avg_sum;
    }
    fits.push_back(EpsilonFit{eps, fit_line(xs, ys), eps_resolved});
  }
  return assemble_pressure_estimate(cells, fits, exhaustive, schedule.consistency_tol);
}

PressureEstimate entropy(const SemigroupSystem& sys, const SampleCloud& cloud,
                         const Schedule& schedule, int threads) {
  return capacity_pressure(sys, zero_family(sys.m()), cloud, schedule,
                           SumVariant::separated, threads);
}

// ---------------------------------------------------------------------------
// Caratheodory pressure through weighted covers by variable-length Bowen balls

namespace {

// Per-(base word, delta) cover state: base orbit rows shared by every
// extension, extension rows and Birkhoff sums on top, plus memoized arcs.
class MprimeWordCover {
 public:
  MprimeWordCover(const SemigroupSystem& sys, const PotentialFamily& family,
                  std::span<const Symbol> w, const std::vector<std::vector<Symbol>>& exts,
                  const SampleCloud& cloud, double delta)
      : sys_(sys), cloud_(cloud), delta_(delta), n_base_(static_cast<int>(w.size())) {
    base_ = orbit_matrix(sys, w, cloud.points);
    const Eigen::ArrayXd s_base = birkhoff_sums(sys, family, w, cloud.points);
    ext_rows_.reserve(exts.size());
    ext_sums_.reserve(exts.size());
    for (const auto& v : exts) {
      Eigen::ArrayXXd rows(static_cast<Eigen::Index>(v.size()), cloud.size());
      Eigen::ArrayXd cur = base_.row(base_.rows() - 1).transpose();
      Eigen::ArrayXd s = s_base;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const int i = v[k];
        for (Eigen::Index j = 0; j < cur.size(); ++j)
          s[j] += potential_value(sys, family, i, cur[j]);
        apply_generator_inplace(sys, i, cur);
        rows.row(static_cast<Eigen::Index>(k)) = cur.transpose();
      }
      ext_rows_.push_back(std::move(rows));
      ext_sums_.push_back(std::move(s));
    }
    double a_sup = 0.0;
    for (const auto& f : sys.maps) {
      if (const auto* lin = std::get_if<LinearMod1>(&f)) a_sup = std::max(a_sup, double(lin->slope));
      else if (const auto* mp = std::get_if<MannevillePomeau>(&f)) a_sup = std::max(a_sup, 2.0 + mp->s);
      else
        a_sup = std::max(a_sup, *std::max_element(std::get<PiecewiseLinearFull>(f).slopes.begin(),
                                                  std::get<PiecewiseLinearFull>(f).slopes.end()));
    }
    arc_ok_ = sys.metric == MetricMode::circle && delta * (1.0 + a_sup) < 1.0;
  }

  // Sum of chosen ball weights exp(-alpha |w'| + S_{w'}(center)) for a sweep
  // cover of the cloud; the candidate set at each step is, per extension, the
  // ball at the frontier point and the ball recentred to reach furthest.
  double cover_weight(double alpha, Flags& flags) {
    const auto p = static_cast<std::int64_t>(cloud_.size());
    double total = 0.0;
    std::int64_t u = 0;
    while (u < p) {
      double best_ratio = std::numeric_limits<double>::infinity();
      double best_weight = 0.0;
      std::int64_t best_hi = -1;
      int best_ext = -1;
      for (int e = 0; e < static_cast<int>(ext_rows_.size()); ++e) {
        const IndexArc arc_u = arc(e, static_cast<int>(u));
        IndexArc chosen = arc_u;
        std::int64_t center = u;
        const std::int64_t cstar = std::min(arc_u.hi, p - 1);
        if (cstar > u) {
          const IndexArc arc_c = arc(e, static_cast<int>(cstar));
          if (arc_c.lo <= u) {
            chosen = arc_c;
            center = cstar;
          }
        }
        const std::int64_t hi_eff = std::min(chosen.hi, p - 1);
        const auto newpts = static_cast<double>(hi_eff - u + 1);
        const int len = n_base_ + static_cast<int>(ext_rows_[static_cast<std::size_t>(e)].rows());
        const double weight =
            std::exp(-alpha * len + ext_sums_[static_cast<std::size_t>(e)][center]);
        const double ratio = weight / newpts;
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best_weight = weight;
          best_hi = hi_eff;
          best_ext = e;
        }
      }
      if (best_ext < 0 || best_hi < u) {
        flags.set(Flag::cover_fail);
        return std::numeric_limits<double>::quiet_NaN();
      }
      total += best_weight;
      u = best_hi + 1;
    }
    return total;
  }

 private:
  bool within(int e, std::int64_t c, std::int64_t j) const {
    const auto p = static_cast<std::int64_t>(cloud_.size());
    const auto jc = static_cast<Eigen::Index>(((j % p) + p) % p);
    const auto cc = static_cast<Eigen::Index>(((c % p) + p) % p);
    const bool circle = sys_.metric == MetricMode::circle;
    for (Eigen::Index r = 0; r < base_.rows(); ++r) {
      const double d = circle ? circle_distance(base_(r, cc), base_(r, jc))
                              : std::abs(base_(r, cc) - base_(r, jc));
      if (d > delta_) return false;
    }
    const auto& rows = ext_rows_[static_cast<std::size_t>(e)];
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      const double d = circle ? circle_distance(rows(r, cc), rows(r, jc))
                              : std::abs(rows(r, cc) - rows(r, jc));
      if (d > delta_) return false;
    }
    return true;
  }

  IndexArc arc(int e, int center) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(e) << 40) | static_cast<std::uint64_t>(center);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const auto p = static_cast<std::int64_t>(cloud_.size());
    auto pred = [&](std::int64_t j) { return within(e, center, j); };
    std::int64_t right_cap = p - 1;
    std::int64_t left_cap = p - 1;
    if (sys_.metric == MetricMode::interval) {
      right_cap = p - 1 - center;
      left_cap = center;
    }
    IndexArc out;
    if (arc_ok_) {
      const std::int64_t r = detail::gallop_extent(center, +1, right_cap, pred);
      const std::int64_t l =
          detail::gallop_extent(center, -1, std::min(left_cap, p - 1 - r), pred);
      out = IndexArc{center - l, center + r};
    } else {
      std::int64_t r = 0;
      while (r < right_cap && pred(center + r + 1)) ++r;
      std::int64_t l = 0;
      const std::int64_t lcap = std::min(left_cap, p - 1 - r);
      while (l < lcap && pred(center - l - 1)) ++l;
      out = IndexArc{center - l, center + r};
    }
    memo_.emplace(key, out);
    return out;
  }

  const SemigroupSystem& sys_;
  const SampleCloud& cloud_;
  double delta_;
  int n_base_;
  Eigen::ArrayXXd base_;
  std::vector<Eigen::ArrayXXd> ext_rows_;
  std::vector<Eigen::ArrayXd> ext_sums_;
  std::unordered_map<std::uint64_t, IndexArc> memo_;
  bool arc_ok_ = false;
};

std::vector<std::vector<Symbol>> make_extensions(int m, int max_len) {
  std::vector<std::vector<Symbol>> exts;
  exts.push_back({});
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Symbol> v(static_cast<std::size_t>(len), 0);
    while (true) {
      exts.push_back(v);
      int k = len - 1;
      while (k >= 0 && ++v[static_cast<std::size_t>(k)] == m) {
        v[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  return exts;
}

}  // namespace

PressureEstimate caratheodory_pressure(const SemigroupSystem& sys,
                                       const PotentialFamily& family,
                                       const SampleCloud& cloud,
                                       const Schedule& schedule, int threads) {
  validate(schedule);
  if (family.size() != static_cast<std::size_t>(sys.m()))
    throw std::invalid_argument("caratheodory_pressure: potential family size mismatch");
  const int n_base = schedule.word_lengths.back();
  int ext_len = std::max(0, schedule.mprime_extension);
  while (ext_len > 0 && std::pow(static_cast<double>(sys.m()), ext_len) > 64.0) --ext_len;
  const auto exts = make_extensions(sys.m(), ext_len);
  const double beta = max_log_factor_on_cloud(sys, cloud);

  std::vector<PartitionCell> cells;
  std::vector<EpsilonFit> fits;
  bool exhaustive_all = true;
  Flags flags;

  for (double delta : schedule.epsilons) {
    const bool resolved =
        cloud.resolution <=
        0.5 * delta * std::exp(-static_cast<double>(n_base + ext_len) * beta);
    const WordSource source =
        make_word_source(sys, n_base, schedule, mix_seed(double_bits(delta), 3));
    exhaustive_all = exhaustive_all && source.exhaustive;

    // Averaged cover weight on a grid of alphas, one context per word.
    auto mean_weights = [&](const std::vector<double>& alphas) {
      Eigen::ArrayXXd table(static_cast<Eigen::Index>(alphas.size()),
                            static_cast<Eigen::Index>(source.count));
      parallel_for(source.count, threads, [&](std::int64_t i) {
        std::vector<Symbol> buf;
        source.symbols_for(i, buf);
        MprimeWordCover cover(sys, family, buf, exts, cloud, delta);
        Flags local;
        for (std::size_t a = 0; a < alphas.size(); ++a)
          table(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) =
              cover.cover_weight(alphas[a], local);
        if (local.any()) table(0, static_cast<Eigen::Index>(i)) = std::numeric_limits<double>::quiet_NaN();
      });
      std::vector<double> means(alphas.size());
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        long double acc = 0.0L;
        for (Eigen::Index i = 0; i < table.cols(); ++i)
          acc += table(static_cast<Eigen::Index>(a), i);
        means[a] = static_cast<double>(acc / static_cast<long double>(source.count));
      }
      return means;
    };

    // Three refinement passes over alpha; M(alpha) decreasing, crossing at 1.
    double lo = -8.0, hi = 8.0;
    double crossing = std::numeric_limits<double>::quiet_NaN();
    double log_m_at_crossing = 0.0;
    for (int stage = 0; stage < 3 && hi - lo > 0; ++stage) {
      const int grid = stage == 0 ? 33 : 21;
      std::vector<double> alphas(static_cast<std::size_t>(grid));
      for (int g = 0; g < grid; ++g)
        alphas[static_cast<std::size_t>(g)] = lo + (hi - lo) * g / (grid - 1);
      const auto means = mean_weights(alphas);
      int last_ge = -1;
      for (int g = 0; g < grid; ++g)
        if (std::isfinite(means[static_cast<std::size_t>(g)]) &&
            means[static_cast<std::size_t>(g)] >= 1.0)
          last_ge = g;
      if (last_ge < 0) {
        // crossing below the grid
        hi = alphas.front();
        lo = hi - 4.0;
        --stage;
        continue;
      }
      if (last_ge == grid - 1) {
        lo = alphas.back();
        hi = lo + 4.0;
        --stage;
        continue;
      }
      lo = alphas[static_cast<std::size_t>(last_ge)];
      hi = alphas[static_cast<std::size_t>(last_ge) + 1];
      crossing = 0.5 * (lo + hi);
      log_m_at_crossing = std::log(means[static_cast<std::size_t>(last_ge)]);
      if (hi - lo <= schedule.alpha_tol) break;
    }
    if (!std::isfinite(crossing)) flags.set(Flag::cover_fail);

    PartitionCell cell;
    cell.variant = "mprime";
    cell.word_length = n_base;
    cell.epsilon = delta;
    cell.n_words = source.count;
    cell.log_avg_sum = log_m_at_crossing;
    cell.stderr_ = 0.0;
    cell.resolved = resolved;
    cells.push_back(cell);

    EpsilonFit fit;
    fit.epsilon = delta;
    fit.fit.slope = crossing;
    fit.resolved = resolved;
    fits.push_back(fit);
  }

  PressureEstimate est =
      assemble_pressure_estimate(cells, fits, exhaustive_all, schedule.consistency_tol);
  est.flags.merge(flags);
  return est;
}

SandwichCell sandwich_cell(const SemigroupSystem& sys, const PotentialFamily& family,
                           const SampleCloud& cloud, int n, double eps,
                           const Schedule& schedule, int threads) {
  const double modulus = potential_modulus(sys, family, eps / 2.0);
  const CellSums span_eps = cell_word_sums(sys, family, cloud, n, eps, schedule,
                                           SumVariant::spanning, threads);
  const CellSums sep_eps = cell_word_sums(sys, family, cloud, n, eps, schedule,
                                          SumVariant::separated, threads);
  const CellSums span_half = cell_word_sums(sys, family, cloud, n, eps / 2.0, schedule,
                                            SumVariant::spanning, threads);
  SandwichCell out;
  out.word_length = n;
  out.epsilon = eps;
  out.modulus = modulus;
  const double grow = std::exp(static_cast<double>(n) * modulus);
  for (std::size_t i = 0; i < span_eps.values.size(); ++i) {
    const double q = span_eps.values[i];
    const double p = sep_eps.values[i];
    const double qh = span_half.values[i];
    const double scale = std::max({q, p, 1.0});
    out.max_violation = std::max(out.max_violation, (q - p) / scale);
    out.max_violation = std::max(out.max_violation, (p - grow * qh) / scale);
  }
  out.holds = out.max_violation <= 1e-9;
  return out;
}

}  // namespace semipress
