#include "semipress/bowen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "semipress/kernel.hpp"
#include "semipress/parallel.hpp"
#include "semipress/rng.hpp"

namespace semipress {

LyapBounds lyapunov_bounds_on_cloud(const SemigroupSystem& sys, const SampleCloud& cloud) {
  LyapBounds b;
  b.alpha = std::numeric_limits<double>::infinity();
  b.beta = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < sys.m(); ++i) {
    const auto& f = sys.maps[static_cast<std::size_t>(i)];
    if (const auto* lin = std::get_if<LinearMod1>(&f)) {
      const double l = std::log(static_cast<double>(lin->slope));
      b.alpha = std::min(b.alpha, l);
      b.beta = std::max(b.beta, l);
      continue;
    }
    for (Eigen::Index j = 0; j < cloud.size(); ++j) {
      const double l = std::log(map_factor(f, cloud.points[j]));
      b.alpha = std::min(b.alpha, l);
      b.beta = std::max(b.beta, l);
    }
  }
  b.warn_nonexpanding = !(b.alpha > 0.0);
  return b;
}

double moran_dimension(std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("moran_dimension: no ratios");
  for (double r : ratios)
    if (!(r > 0.0 && r < 1.0))
      throw std::invalid_argument("moran_dimension: ratios must lie in (0,1)");
  auto value = [&](double s) {
    double sum = 0.0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum;
  };
  double lo = 0.0;
  if (value(lo) <= 1.0) return 0.0;  // single ratio: r^0 = 1
  double hi = 1.0;
  while (value(hi) > 1.0) hi *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) > 1.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::int64_t> box_counts(const SampleCloud& cloud,
                                     std::span<const double> scales) {
  std::vector<std::int64_t> counts;
  counts.reserve(scales.size());
  for (double r : scales) {
    if (!(r > 0.0 && r <= 1.0))
      throw std::invalid_argument("box_counts: scales must lie in (0,1]");
    std::set<std::int64_t> boxes;
    for (Eigen::Index j = 0; j < cloud.size(); ++j)
      boxes.insert(static_cast<std::int64_t>(std::floor(cloud.points[j] / r)));
    counts.push_back(static_cast<std::int64_t>(boxes.size()));
  }
  return counts;
}

double box_counting_dimension(const SampleCloud& cloud, std::span<const double> scales) {
  if (scales.size() < 3)
    throw std::invalid_argument("box_counting_dimension: need at least 3 scales");
  const auto counts = box_counts(cloud, scales);
  Eigen::ArrayXd xs(static_cast<Eigen::Index>(scales.size()));
  Eigen::ArrayXd ys(xs.size());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    xs[static_cast<Eigen::Index>(k)] = std::log(1.0 / scales[k]);
    ys[static_cast<Eigen::Index>(k)] = std::log(static_cast<double>(counts[k]));
  }
  return fit_line(xs, ys).slope;
}

double dimension_equal_exponent(double h, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("dimension_equal_exponent: alpha <= 0");
  return h / alpha;
}

double pressure_at_t(const SemigroupSystem& sys, const SampleCloud& cloud, double t,
                     const Schedule& schedule, int threads) {
  if (t < 0.0) throw std::invalid_argument("pressure_at_t: t must be >= 0");
  const PotentialFamily fam = family_of(ScaledLogFactor{-t}, sys.m());
  return capacity_pressure(sys, fam, cloud, schedule, SumVariant::separated, threads).value;
}

// ---------------------------------------------------------------------------

GeometricProfile::GeometricProfile(const SemigroupSystem& sys, const SampleCloud& cloud,
                                   const Schedule& schedule, int threads)
    : schedule_(schedule), consistency_tol_(schedule.consistency_tol) {
  validate(schedule);
  if (schedule.word_lengths.size() < 3)
    throw std::invalid_argument("GeometricProfile: need at least 3 word lengths");
  // Greedy order under -t*log a is ascending log-factor sum for every t > 0,
  // realized here with coefficient -1.
  const PotentialFamily order_fam = family_of(ScaledLogFactor{-1.0}, sys.m());
  const PotentialFamily geom_fam = family_of(ScaledLogFactor{1.0}, sys.m());
  n_eps_ = schedule.epsilons.size();
  n_len_ = schedule.word_lengths.size();
  for (double eps : schedule.epsilons) {
    for (int n : schedule.word_lengths) {
      Cell cell;
      cell.word_length = n;
      cell.epsilon = eps;
      cell.resolved = cell_resolved(sys, cloud, n, eps);
      const auto count = word_count(sys.alphabet, n);
      cell.exhaustive = count && *count <= schedule.word_budget;
      std::vector<Word> samples;
      if (cell.exhaustive) {
        cell.n_words = static_cast<std::int64_t>(*count);
      } else {
        cell.n_words = schedule.mc_samples;
        samples = sample_words(sys.alphabet, n, schedule.mc_samples,
                               mix_seed(schedule.seed, static_cast<std::uint64_t>(n), 17));
      }
      cell.word_logsums.resize(static_cast<std::size_t>(cell.n_words));
      parallel_for(cell.n_words, threads, [&](std::int64_t i) {
        std::vector<Symbol> buf;
        if (cell.exhaustive) word_at(sys.alphabet, n, static_cast<std::uint64_t>(i), buf);
        else buf = samples[static_cast<std::size_t>(i)].symbols();
        const auto idx = maximal_separated(sys, order_fam, buf, cloud, eps);
        const Eigen::ArrayXd L = birkhoff_sums(sys, geom_fam, buf, cloud.points);
        auto& out = cell.word_logsums[static_cast<std::size_t>(i)];
        out.reserve(idx.size());
        for (int id : idx) out.push_back(L[id]);
      });
      cells_.push_back(std::move(cell));
    }
  }
}

PressureEstimate GeometricProfile::estimate_at(double t) const {
  std::vector<PartitionCell> cells;
  std::vector<EpsilonFit> fits;
  bool exhaustive = true;
  std::size_t c = 0;
  for (std::size_t e = 0; e < n_eps_; ++e) {
    Eigen::ArrayXd xs(static_cast<Eigen::Index>(n_len_));
    Eigen::ArrayXd ys(xs.size());
    bool eps_resolved = true;
    for (std::size_t k = 0; k < n_len_; ++k, ++c) {
      const Cell& cell = cells_[c];
      long double acc = 0.0L;
      for (const auto& logs : cell.word_logsums) {
        long double sum = 0.0L;
        for (double L : logs) sum += std::exp(-t * L);
        acc += sum;
      }
      const double mean = static_cast<double>(acc / static_cast<long double>(cell.n_words));
      exhaustive = exhaustive && cell.exhaustive;
      eps_resolved = eps_resolved && cell.resolved;
      PartitionCell row;
      row.variant = "separated";
      row.word_length = cell.word_length;
      row.epsilon = cell.epsilon;
      row.n_words = cell.n_words;
      row.log_avg_sum = std::log(mean);
      row.resolved = cell.resolved;
      cells.push_back(row);
      xs[static_cast<Eigen::Index>(k)] = cell.word_length;
      ys[static_cast<Eigen::Index>(k)] = row.log_avg_sum;
    }
    fits.push_back(EpsilonFit{cells_[c - 1].epsilon, fit_line(xs, ys), eps_resolved});
  }
  return assemble_pressure_estimate(cells, fits, exhaustive, consistency_tol_);
}

// ---------------------------------------------------------------------------

BowenResult bowen_root(const SemigroupSystem& sys, const SampleCloud& cloud,
                       const Schedule& schedule, double t_tol, double p_tol,
                       int threads) {
  BowenResult res;
  const LyapBounds bounds = lyapunov_bounds_on_cloud(sys, cloud);
  res.alpha = bounds.alpha;
  res.beta = bounds.beta;
  if (bounds.warn_nonexpanding) {
    res.flags.set(Flag::warn_nonexpanding);
    res.t_star = std::numeric_limits<double>::quiet_NaN();
    return res;
  }

  const PressureEstimate ent = entropy(sys, cloud, schedule, threads);
  res.entropy_value = ent.value;
  res.flags.merge(ent.flags);

  const double slack = 10.0 * t_tol;
  double lo = std::max(0.0, res.entropy_value / bounds.beta - slack);
  double hi = res.entropy_value / bounds.alpha + slack;
  res.bracket_lo = lo;
  res.bracket_hi = hi;

  GeometricProfile profile(sys, cloud, schedule, threads);
  std::vector<std::pair<double, double>> trace;
  auto eval = [&](double t) {
    const double p = profile.estimate_at(std::max(t, 1e-12)).value;
    trace.emplace_back(t, p);
    return p;
  };

  double p_lo = eval(lo);
  int guard = 0;
  while (p_lo <= 0.0 && lo > 0.0 && guard++ < 8) {
    lo = std::max(0.0, lo - slack);
    p_lo = eval(lo);
    if (lo == 0.0) break;
  }
  double p_hi = eval(hi);
  guard = 0;
  while (p_hi >= 0.0 && guard++ < 64) {
    hi += std::max(slack, 0.5);
    p_hi = eval(hi);
  }

  double t_star = 0.5 * (lo + hi);
  while (hi - lo > t_tol) {
    t_star = 0.5 * (lo + hi);
    const double p = eval(t_star);
    if (std::abs(p) <= p_tol) break;
    if (p > 0.0) lo = t_star;
    else hi = t_star;
    t_star = 0.5 * (lo + hi);
  }
  res.t_star = t_star;

  std::sort(trace.begin(), trace.end());
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    if (trace[i + 1].first > trace[i].first + 1e-15 &&
        trace[i + 1].second > trace[i].second + 0.02) {
      res.flags.set(Flag::nonmonotone);
      res.t_star = std::numeric_limits<double>::quiet_NaN();
    }
  }
  res.pressure_trace = std::move(trace);

  // Box-counting proxy on scales clear of the cloud resolution.
  std::vector<double> scales;
  for (int k = 3; k <= 24 && scales.size() < 7; ++k) {
    const double r = std::pow(2.0, -k);
    if (r >= 8.0 * cloud.resolution || scales.size() < 3) scales.push_back(r);
    if (r < 8.0 * cloud.resolution && scales.size() >= 3) break;
  }
  res.dim_box = box_counting_dimension(cloud, scales);
  res.flags.set(Flag::proxy);

  if (const auto* cr = std::get_if<CantorRegion>(&cloud.source)) {
    if (!std::holds_alternative<MannevillePomeau>(cr->base)) {
      std::vector<double> ratios;
      for (int j : cr->branches) {
        const auto [blo, bhi] = branch_interval(cr->base, j);
        ratios.push_back(bhi - blo);
      }
      res.dim_moran = moran_dimension(ratios);
    }
  }
  return res;
}

SlopeCheck prop_slope_check(const SemigroupSystem& sys, const SampleCloud& cloud,
                            const Schedule& schedule, double t, double h_step,
                            double tol, int threads) {
  if (t < 0.0 || h_step < 0.0)
    throw std::invalid_argument("prop_slope_check: t and h_step must be >= 0");
  const LyapBounds bounds = lyapunov_bounds_on_cloud(sys, cloud);
  SlopeCheck out;
  out.tol = tol;
  out.lower_bound = -bounds.beta * h_step;
  out.upper_bound = -bounds.alpha * h_step;
  if (h_step == 0.0) {
    out.delta_p = 0.0;
    out.pass = true;
    return out;
  }
  const double p0 = pressure_at_t(sys, cloud, t, schedule, threads);
  const double p1 = pressure_at_t(sys, cloud, t + h_step, schedule, threads);
  out.delta_p = p1 - p0;
  out.pass = out.delta_p >= out.lower_bound - tol && out.delta_p <= out.upper_bound + tol;
  return out;
}

}  // namespace semipress
