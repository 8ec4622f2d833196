#include "semipress/local_measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "semipress/kernel.hpp"
#include "semipress/parallel.hpp"
#include "semipress/rng.hpp"
#include "semipress/words.hpp"

namespace semipress {

namespace {

std::uint64_t double_bits(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof(b));
  return b;
}

struct Window {
  double lo = 0.0;
  double len = 0.0;
};

// Everything outside [x-r, x+r] fails the k=0 Bowen constraint, so sampling
// is restricted to that window (stratification around x).
Window mass_window(const SemigroupSystem& sys, double x, double r) {
  if (sys.metric == MetricMode::circle) {
    if (2.0 * r >= 1.0) return {0.0, 1.0};
    double lo = x - r;
    if (lo < 0.0) lo += 1.0;
    return {lo, 2.0 * r};
  }
  const double lo = std::max(0.0, x - r);
  const double hi = std::min(1.0, x + r);
  return {lo, hi - lo};
}

double window_point(const Window& win, double u) {
  double y = win.lo + win.len * u;
  if (y >= 1.0) y -= 1.0;
  return y;
}

// Measure of the plain interval [a, b] under a Bernoulli cylinder measure,
// by descending the cylinder tree; cylinders at depth k split their parents
// at the branch-interval proportions.
double bernoulli_interval_mass(const BernoulliCylinder& mu, double a, double b) {
  if (b <= a) return 0.0;
  const int branches = branch_count(mu.base);
  struct Node {
    double lo, hi, weight;
    int depth;
  };
  std::vector<Node> stack{{0.0, 1.0, 1.0, 0}};
  double total = 0.0;
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    if (node.weight <= 0.0 || node.hi <= a || node.lo >= b) continue;
    if (node.lo >= a && node.hi <= b) {
      total += node.weight;
      continue;
    }
    if (node.depth >= mu.depth_cap || node.weight < 1e-18) {
      const double overlap = std::min(node.hi, b) - std::max(node.lo, a);
      total += node.weight * overlap / (node.hi - node.lo);
      continue;
    }
    const double width = node.hi - node.lo;
    for (int j = 0; j < branches; ++j) {
      const auto [blo, bhi] = branch_interval(mu.base, j);
      stack.push_back({node.lo + blo * width, node.lo + bhi * width,
                       node.weight * mu.weights[static_cast<std::size_t>(j)],
                       node.depth + 1});
    }
  }
  return total;
}

double bernoulli_arc_mass(const BernoulliCylinder& mu, double lo, double len) {
  if (len >= 1.0) return 1.0;
  const double hi = lo + len;
  if (hi <= 1.0) return bernoulli_interval_mass(mu, lo, hi);
  return bernoulli_interval_mass(mu, lo, 1.0) + bernoulli_interval_mass(mu, 0.0, hi - 1.0);
}

// Ball arc [x - left, x + right] by continuous bisection of the membership
// predicate on each side.
std::pair<double, double> ball_arc_extents(const SemigroupSystem& sys,
                                           std::span<const Symbol> w, double x, double r) {
  auto side = [&](int dir) {
    double lo = 0.0;
    double hi = (sys.metric == MetricMode::circle) ? r : r;  // ball is inside the window
    auto probe = [&](double u) {
      double y = x + dir * u;
      if (sys.metric == MetricMode::circle) {
        y -= std::floor(y);
      } else if (y < 0.0 || y >= 1.0) {
        return false;
      }
      return in_bowen_ball(sys, w, x, r, y);
    };
    if (probe(hi)) return hi;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (probe(mid)) lo = mid;
      else hi = mid;
    }
    return lo;
  };
  return {side(-1), side(+1)};
}

}  // namespace

MeasureModel lebesgue_measure(std::int64_t sample_budget, std::uint64_t seed) {
  return MeasureModel{LebesgueCircle{}, sample_budget, seed};
}

MassResult bowen_ball_mass(const MeasureModel& mu, const SemigroupSystem& sys,
                           std::span<const Symbol> w, double x, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("bowen_ball_mass: r must be > 0");
  if (mu.sample_budget < 1000)
    throw std::invalid_argument("MeasureModel: sample_budget must be >= 1000");
  MassResult out;

  if (const auto* emp = std::get_if<EmpiricalOrbit>(&mu.kind)) {
    if (emp->atoms.empty()) throw std::invalid_argument("EmpiricalOrbit: no atoms");
    std::int64_t hits = 0;
    for (double a : emp->atoms)
      if (in_bowen_ball(sys, w, x, r, a)) ++hits;
    out.mass = static_cast<double>(hits) / static_cast<double>(emp->atoms.size());
    if (hits == 0) out.flags.set(Flag::zero_mass);
    return out;
  }

  if (const auto* bc = std::get_if<BernoulliCylinder>(&mu.kind)) {
    const auto [left, right] = ball_arc_extents(sys, w, x, r);
    double lo = x - left;
    if (lo < 0.0) lo += 1.0;
    out.mass = bernoulli_arc_mass(*bc, lo, left + right);
    if (out.mass <= 0.0) out.flags.set(Flag::zero_mass);
    return out;
  }

  // Lebesgue: chunked Monte-Carlo in the base window until ~100 hits or the
  // budget runs out.
  const Window win = mass_window(sys, x, r);
  const std::uint64_t seed = mix_seed(mu.seed, double_bits(x), double_bits(r),
                                      static_cast<std::uint64_t>(w.size()));
  std::int64_t hits = 0;
  std::int64_t n = 0;
  const std::int64_t chunk = 8192;
  const std::int64_t cap = std::min<std::int64_t>(mu.sample_budget, 1'000'000);
  while (n < cap && (hits < 100 || n < 1000)) {
    const std::int64_t take = std::min(chunk, cap - n);
    for (std::int64_t i = 0; i < take; ++i) {
      const double y = window_point(win, uniform01(seed, static_cast<std::uint64_t>(n + i)));
      if (in_bowen_ball(sys, w, x, r, y)) ++hits;
    }
    n += take;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  out.mass = win.len * p;
  out.stderr_ = win.len * std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(n)));
  out.samples = n;
  if (hits == 0) out.flags.set(Flag::zero_mass);
  return out;
}

namespace {

struct ExtremeRow {
  double max_term = -std::numeric_limits<double>::infinity();
  double min_term = std::numeric_limits<double>::infinity();
  std::int64_t words = 0;
  bool zero_mass = false;
};

// One radius, all horizons, Lebesgue: one shared sample cloud in the window,
// pruned down the word tree (a sample dies when its orbit leaves the ball).
std::vector<ExtremeRow> lebesgue_extremes(const MeasureModel& mu,
                                          const SemigroupSystem& sys,
                                          const PotentialFamily& family, double x,
                                          double r, int n_max) {
  const Window win = mass_window(sys, x, r);
  const auto n_s =
      static_cast<std::int64_t>(std::min<std::int64_t>(mu.sample_budget, 4'000'000));
  const std::uint64_t seed = mix_seed(mu.seed, double_bits(x), double_bits(r), 11);
  std::vector<double> ys(static_cast<std::size_t>(n_s));
  for (std::int64_t i = 0; i < n_s; ++i)
    ys[static_cast<std::size_t>(i)] = window_point(win, uniform01(seed, static_cast<std::uint64_t>(i)));

  std::vector<ExtremeRow> rows(static_cast<std::size_t>(n_max));

  struct Node {
    std::vector<double> alive;  // current orbit points of surviving samples
    double center;
    double birkhoff;
    int depth;
    int next_symbol;
  };
  std::vector<Node> stack;
  stack.push_back({std::move(ys), x, 0.0, 0, 0});
  const double log_win = std::log(win.len);
  const double log_ns = std::log(static_cast<double>(n_s));
  while (!stack.empty()) {
    Node& node = stack.back();
    if (node.depth == n_max || node.next_symbol == sys.m()) {
      stack.pop_back();
      continue;
    }
    const int s = node.next_symbol++;
    Node child;
    child.depth = node.depth + 1;
    child.next_symbol = 0;
    child.birkhoff = node.birkhoff + potential_value(sys, family, s, node.center);
    child.center = apply_generator(sys, s, node.center);
    child.alive.reserve(node.alive.size());
    for (double y : node.alive) {
      const double fy = apply_generator(sys, s, y);
      const double d = sys.metric == MetricMode::circle ? circle_distance(child.center, fy)
                                                        : std::abs(child.center - fy);
      if (d <= r) child.alive.push_back(fy);
    }
    auto& row = rows[static_cast<std::size_t>(child.depth - 1)];
    row.words += 1;
    if (child.alive.empty()) {
      row.zero_mass = true;
    } else {
      const double log_mass =
          log_win + std::log(static_cast<double>(child.alive.size())) - log_ns;
      const double term = log_mass - child.birkhoff;
      row.max_term = std::max(row.max_term, term);
      row.min_term = std::min(row.min_term, term);
      if (child.depth < n_max) stack.push_back(std::move(child));
      continue;
    }
    // dead subtree: deeper masses are zero too
    for (int d = child.depth + 1; d <= n_max; ++d)
      rows[static_cast<std::size_t>(d - 1)].zero_mass = true;
  }
  return rows;
}

std::vector<ExtremeRow> exact_extremes(const MeasureModel& mu, const SemigroupSystem& sys,
                                       const PotentialFamily& family, double x, double r,
                                       int n_max) {
  std::vector<ExtremeRow> rows(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const auto count = word_count(sys.alphabet, n);
    std::vector<Symbol> buf;
    auto& row = rows[static_cast<std::size_t>(n - 1)];
    for (std::uint64_t i = 0; i < *count; ++i) {
      word_at(sys.alphabet, n, i, buf);
      const MassResult m = bowen_ball_mass(mu, sys, buf, x, r);
      row.words += 1;
      if (m.flags.has(Flag::zero_mass) || m.mass <= 0.0) {
        row.zero_mass = true;
        continue;
      }
      const double term = std::log(m.mass) - birkhoff_sum(sys, family, buf, x);
      row.max_term = std::max(row.max_term, term);
      row.min_term = std::min(row.min_term, term);
    }
  }
  return rows;
}

}  // namespace

LocalPressureReport local_pressure(const MeasureModel& mu, const SemigroupSystem& sys,
                                   const PotentialFamily& family, double x,
                                   const std::vector<int>& horizons,
                                   const std::vector<double>& radii,
                                   std::uint64_t word_budget) {
  if (horizons.empty() || radii.empty())
    throw std::invalid_argument("local_pressure: horizons and radii must be nonempty");
  for (std::size_t i = 0; i + 1 < horizons.size(); ++i)
    if (horizons[i] >= horizons[i + 1])
      throw std::invalid_argument("local_pressure: horizons must ascend");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (radii[i] <= radii[i + 1])
      throw std::invalid_argument("local_pressure: radii must descend");
  const int n_max = horizons.back();
  const auto count = word_count(sys.alphabet, n_max);
  if (!count || *count > word_budget)
    throw std::invalid_argument("local_pressure: m^n exceeds the word budget");

  LocalPressureReport rep;
  rep.x = x;
  std::vector<double> lower_at_radius(radii.size(),
                                      std::numeric_limits<double>::quiet_NaN());
  std::vector<double> upper_at_radius(radii.size(),
                                      std::numeric_limits<double>::quiet_NaN());

  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    const std::vector<ExtremeRow> rows =
        std::holds_alternative<LebesgueCircle>(mu.kind)
            ? lebesgue_extremes(mu, sys, family, x, r, n_max)
            : exact_extremes(mu, sys, family, x, r, n_max);
    bool truncated = false;
    for (int n : horizons) {
      const ExtremeRow& row = rows[static_cast<std::size_t>(n - 1)];
      if (row.zero_mass) {
        truncated = true;
        rep.flags.set(Flag::zero_mass);
        break;  // deeper horizons only lose more mass
      }
      LocalCell cell;
      cell.horizon = n;
      cell.radius = r;
      cell.lower = -row.max_term / n;
      cell.upper = -row.min_term / n;
      cell.words = row.words;
      rep.cells.push_back(cell);
      lower_at_radius[ri] = cell.lower;
      upper_at_radius[ri] = cell.upper;
    }
    if (truncated) rep.flags.set(Flag::truncated);
  }

  // Value at the smallest radius that kept at least one horizon.
  int chosen = -1;
  for (int ri = static_cast<int>(radii.size()) - 1; ri >= 0; --ri) {
    if (std::isfinite(lower_at_radius[static_cast<std::size_t>(ri)])) {
      chosen = ri;
      break;
    }
  }
  if (chosen < 0) {
    rep.flags.set(Flag::unresolved);
    rep.lower_value = std::numeric_limits<double>::quiet_NaN();
    rep.upper_value = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.lower_value = lower_at_radius[static_cast<std::size_t>(chosen)];
  rep.upper_value = upper_at_radius[static_cast<std::size_t>(chosen)];
  // Agreement between the two smallest usable radii.
  for (int ri = chosen - 1; ri >= 0; --ri) {
    if (!std::isfinite(lower_at_radius[static_cast<std::size_t>(ri)])) continue;
    if (std::abs(lower_at_radius[static_cast<std::size_t>(ri)] - rep.lower_value) > 0.05 ||
        std::abs(upper_at_radius[static_cast<std::size_t>(ri)] - rep.upper_value) > 0.05)
      rep.flags.set(Flag::nonmonotone);
    break;
  }
  return rep;
}

SandwichReport sandwich_check(const MeasureModel& mu, const SemigroupSystem& sys,
                              const PotentialFamily& family, const SampleCloud& cloud,
                              const Schedule& schedule, const std::vector<int>& horizons,
                              const std::vector<double>& radii, int n_points, double tol,
                              int threads) {
  if (n_points < 1) throw std::invalid_argument("sandwich_check: n_points must be >= 1");
  SandwichReport rep;
  rep.tol = tol;
  rep.points.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    const auto idx = static_cast<Eigen::Index>(
        (static_cast<double>(k) + 0.5) / n_points * static_cast<double>(cloud.size()));
    rep.points[static_cast<std::size_t>(k)] = cloud.points[std::min(idx, cloud.size() - 1)];
  }

  std::vector<LocalPressureReport> reports(rep.points.size());
  parallel_for(static_cast<std::int64_t>(rep.points.size()), threads, [&](std::int64_t i) {
    reports[static_cast<std::size_t>(i)] = local_pressure(
        mu, sys, family, rep.points[static_cast<std::size_t>(i)], horizons, radii);
  });

  rep.inf_lower = std::numeric_limits<double>::infinity();
  rep.sup_upper = -std::numeric_limits<double>::infinity();
  for (const auto& lp : reports) {
    rep.flags.merge(lp.flags);
    if (!std::isfinite(lp.lower_value)) continue;
    rep.inf_lower = std::min(rep.inf_lower, lp.lower_value);
    rep.sup_upper = std::max(rep.sup_upper, lp.upper_value);
  }
  rep.pressure = caratheodory_pressure(sys, family, cloud, schedule, threads).value;
  rep.pass = rep.inf_lower - tol <= rep.pressure && rep.pressure <= rep.sup_upper + tol;
  return rep;
}

}  // namespace semipress
