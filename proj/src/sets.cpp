#include "semipress/sets.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "semipress/detail/search.hpp"
#include "semipress/kernel.hpp"

namespace semipress {

namespace {

// ---------------------------------------------------------------------------
// discretize

SampleCloud make_cloud(std::vector<double> pts, double resolution, RegionSpec source) {
  if (pts.empty()) throw std::runtime_error("discretize: empty cloud");
  std::sort(pts.begin(), pts.end());
  SampleCloud cloud{Eigen::Map<const Eigen::ArrayXd>(pts.data(),
                                                     static_cast<Eigen::Index>(pts.size())),
                    resolution, std::move(source)};
  return cloud;
}

std::vector<double> cantor_midpoints(const CantorRegion& region, std::uint64_t budget) {
  const int b = static_cast<int>(region.branches.size());
  if (b == 0) throw std::invalid_argument("CantorRegion: allowed branch set is empty");
  const int total = branch_count(region.base);
  for (int j : region.branches)
    if (j < 0 || j >= total) throw std::invalid_argument("CantorRegion: branch out of range");
  if (region.depth < 1) throw std::invalid_argument("CantorRegion: depth must be >= 1");
  double count = std::pow(static_cast<double>(b), region.depth);
  if (count > static_cast<double>(budget))
    throw std::runtime_error("discretize: cylinder budget exceeded");

  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(count));
  std::vector<int> digits(static_cast<std::size_t>(region.depth), 0);
  while (true) {
    // Cylinder of the itinerary branches[digits[0]], branches[digits[1]], ...
    // built back to front through the branch inverses.
    double lo = 0.0, hi = 1.0;
    for (int k = region.depth - 1; k >= 0; --k) {
      const int j = region.branches[static_cast<std::size_t>(digits[static_cast<std::size_t>(k)])];
      const auto [blo, bhi] = branch_interval(region.base, j);
      const double width = bhi - blo;
      const double nlo = blo + lo * width;
      const double nhi = blo + hi * width;
      lo = nlo;
      hi = nhi;
    }
    pts.push_back(0.5 * (lo + hi));
    int k = region.depth - 1;
    while (k >= 0 && ++digits[static_cast<std::size_t>(k)] == b) {
      digits[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return pts;
}

// ---------------------------------------------------------------------------
// shared per-(word, eps) context

struct WordCtx {
  const SemigroupSystem& sys;
  const SampleCloud& cloud;
  double eps;
  Eigen::ArrayXXd orbits;  // (|w|+1) x P
  Eigen::ArrayXd S;        // Birkhoff sums at cloud points
  bool arc_ok = false;     // Bowen balls are single arcs of the sorted cloud
  bool constant_S = false;

  WordCtx(const SemigroupSystem& sys_, const PotentialFamily& family,
          std::span<const Symbol> w, const SampleCloud& cloud_, double eps_)
      : sys(sys_), cloud(cloud_), eps(eps_) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    orbits = orbit_matrix(sys, w, cloud.points);
    S = birkhoff_sums(sys, family, w, cloud.points);
    double a_sup = 0.0;
    for (const auto& f : sys.maps) {
      double s = 0.0;
      if (const auto* lin = std::get_if<LinearMod1>(&f)) s = lin->slope;
      else if (const auto* mp = std::get_if<MannevillePomeau>(&f)) s = 2.0 + mp->s;
      else s = *std::max_element(std::get<PiecewiseLinearFull>(f).slopes.begin(),
                                 std::get<PiecewiseLinearFull>(f).slopes.end());
      a_sup = std::max(a_sup, s);
    }
    arc_ok = sys.metric == MetricMode::circle && eps * (1.0 + a_sup) < 1.0;
    const double spread = S.maxCoeff() - S.minCoeff();
    constant_S = spread <= 1e-12 * (1.0 + S.abs().maxCoeff());
  }

  Eigen::Index size() const { return cloud.size(); }
  Eigen::Index wrap(std::int64_t i) const {
    const auto p = static_cast<std::int64_t>(size());
    i %= p;
    if (i < 0) i += p;
    return static_cast<Eigen::Index>(i);
  }
  // d_w(center, j) >= bound, circular index.
  bool at_least(std::int64_t c, std::int64_t j, double bound) const {
    return column_distance_at_least(sys, orbits, wrap(c), wrap(j), bound);
  }
  bool within_closed(std::int64_t c, std::int64_t j, double r) const {
    return !column_distance_at_least(sys, orbits, wrap(c), wrap(j),
                                     std::nextafter(r, std::numeric_limits<double>::max()));
  }

  std::vector<int> order_by_descending_sum() const {
    std::vector<int> order(static_cast<std::size_t>(size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    if (!constant_S) {
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (S[a] != S[b]) return S[a] > S[b];
        return a < b;
      });
    }
    return order;
  }
};

using detail::gallop_extent;

IndexArc arc_around(const WordCtx& ctx, std::int64_t c, double radius, bool closed) {
  const auto p = static_cast<std::int64_t>(ctx.size());
  auto pred = [&](std::int64_t j) {
    return closed ? ctx.within_closed(c, j, radius) : !ctx.at_least(c, j, radius);
  };
  std::int64_t right_cap = p - 1;
  std::int64_t left_cap = p - 1;
  if (ctx.sys.metric == MetricMode::interval) {
    right_cap = p - 1 - c;
    left_cap = c;
  }
  const std::int64_t r = gallop_extent(c, +1, right_cap, pred);
  const std::int64_t l = gallop_extent(c, -1, std::min(left_cap, p - 1 - r), pred);
  return IndexArc{c - l, c + r};
}

// First-failure outward component scan; used when arc structure is not
// guaranteed. Always a subset of the true ball.
IndexArc component_around(const WordCtx& ctx, std::int64_t c, double radius, bool closed) {
  const auto p = static_cast<std::int64_t>(ctx.size());
  auto pred = [&](std::int64_t j) {
    return closed ? ctx.within_closed(c, j, radius) : !ctx.at_least(c, j, radius);
  };
  std::int64_t right_cap = p - 1;
  std::int64_t left_cap = p - 1;
  if (ctx.sys.metric == MetricMode::interval) {
    right_cap = p - 1 - c;
    left_cap = c;
  }
  std::int64_t r = 0;
  while (r < right_cap && pred(c + r + 1)) ++r;
  std::int64_t l = 0;
  const std::int64_t lcap = std::min(left_cap, p - 1 - r);
  while (l < lcap && pred(c - l - 1)) ++l;
  return IndexArc{c - l, c + r};
}

IndexArc ball_arc(const WordCtx& ctx, std::int64_t c, double radius, bool closed) {
  return ctx.arc_ok ? arc_around(ctx, c, radius, closed)
                    : component_around(ctx, c, radius, closed);
}

// ---------------------------------------------------------------------------
// covered-run bookkeeping over circular indices (for the separated greedy)

class RunSet {
 public:
  explicit RunSet(std::int64_t size) : size_(size) {}

  bool covered(std::int64_t i) const {
    auto it = runs_.upper_bound(i);
    if (it == runs_.begin()) return false;
    --it;
    return it->second >= i;
  }

  void insert(IndexArc arc) {
    if (arc.count() >= size_) {
      runs_.clear();
      runs_[0] = size_ - 1;
      return;
    }
    std::int64_t lo = arc.lo, hi = arc.hi;
    if (lo < 0) {
      insert_plain(lo + size_, size_ - 1);
      lo = 0;
    }
    if (hi >= size_) {
      insert_plain(0, hi - size_);
      hi = size_ - 1;
    }
    if (lo <= hi) insert_plain(lo, hi);
  }

 private:
  void insert_plain(std::int64_t lo, std::int64_t hi) {
    auto it = runs_.upper_bound(lo);
    if (it != runs_.begin()) {
      auto prev = std::prev(it);
      if (prev->second + 1 >= lo) {
        lo = prev->first;
        hi = std::max(hi, prev->second);
        it = runs_.erase(prev);
      }
    }
    while (it != runs_.end() && it->first <= hi + 1) {
      hi = std::max(hi, it->second);
      it = runs_.erase(it);
    }
    runs_[lo] = hi;
  }

  std::int64_t size_;
  std::map<std::int64_t, std::int64_t> runs_;
};

std::vector<int> separated_arc_path(const WordCtx& ctx) {
  const auto p = static_cast<std::int64_t>(ctx.size());
  RunSet covered(p);
  std::vector<int> accepted;
  for (int c : ctx.order_by_descending_sum()) {
    if (covered.covered(c)) continue;
    accepted.push_back(c);
    covered.insert(ball_arc(ctx, c, ctx.eps, /*closed=*/false));
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

std::vector<int> separated_general_path(const WordCtx& ctx) {
  const auto p = static_cast<std::int64_t>(ctx.size());
  const auto& pts = ctx.cloud.points;
  const bool circle = ctx.sys.metric == MetricMode::circle;
  std::set<int> accepted;

  auto conflicts = [&](int c) {
    const double pos = pts[c];
    // Walk accepted neighbours outwards while they stay inside the base-eps
    // window; d_w >= d makes everything outside automatically separated.
    auto hit = [&](int a) { return !ctx.at_least(c, a, ctx.eps); };
    auto fwd = accepted.lower_bound(c);
    for (auto it = fwd; it != accepted.end(); ++it) {
      if (pts[*it] - pos >= ctx.eps) break;
      if (hit(*it)) return true;
    }
    for (auto it = fwd; it != accepted.begin();) {
      --it;
      if (pos - pts[*it] >= ctx.eps) break;
      if (hit(*it)) return true;
    }
    if (circle) {
      const double up = pos + ctx.eps - 1.0;  // wrap past 1
      for (auto it = accepted.begin(); it != accepted.end() && pts[*it] < up; ++it)
        if (hit(*it)) return true;
      const double dn = pos - ctx.eps + 1.0;  // wrap below 0
      for (auto it = accepted.rbegin(); it != accepted.rend() && pts[*it] > dn; ++it)
        if (hit(*it)) return true;
    }
    return false;
  };

  for (int c : ctx.order_by_descending_sum()) {
    if (!conflicts(c)) accepted.insert(c);
  }
  (void)p;
  return std::vector<int>(accepted.begin(), accepted.end());
}

#ifndef NDEBUG
void debug_check_spanning(const WordCtx& ctx, const std::vector<int>& sep) {
  if (ctx.size() > 4096) return;
  for (Eigen::Index j = 0; j < ctx.size(); ++j) {
    bool ok = false;
    for (int a : sep)
      if (ctx.within_closed(a, j, ctx.eps)) {
        ok = true;
        break;
      }
    assert(ok && "maximal separated set must span the cloud");
  }
}
#endif

std::vector<int> separated_impl(const WordCtx& ctx) {
  std::vector<int> out =
      ctx.arc_ok ? separated_arc_path(ctx) : separated_general_path(ctx);
#ifndef NDEBUG
  debug_check_spanning(ctx, out);
#endif
  return out;
}

// ---------------------------------------------------------------------------
// greedy cover

class Fenwick {
 public:
  explicit Fenwick(std::int64_t n) : n_(n), tree_(static_cast<std::size_t>(n) + 1, 0) {
    for (std::int64_t i = 1; i <= n_; ++i) {
      tree_[static_cast<std::size_t>(i)] += 1;
      const std::int64_t j = i + (i & -i);
      if (j <= n_) tree_[static_cast<std::size_t>(j)] += tree_[static_cast<std::size_t>(i)];
    }
  }
  void clear_point(std::int64_t i) {  // 1 -> 0
    for (std::int64_t j = i + 1; j <= n_; j += j & -j) tree_[static_cast<std::size_t>(j)] -= 1;
  }
  std::int64_t prefix(std::int64_t i) const {  // count of ones in [0, i]
    std::int64_t s = 0;
    for (std::int64_t j = i + 1; j > 0; j -= j & -j) s += tree_[static_cast<std::size_t>(j)];
    return s;
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) const {
    if (hi < lo) return 0;
    return prefix(hi) - (lo > 0 ? prefix(lo - 1) : 0);
  }

 private:
  std::int64_t n_;
  std::vector<std::int64_t> tree_;
};

std::int64_t circular_range_count(const Fenwick& fw, IndexArc arc, std::int64_t p) {
  if (arc.count() >= p) return fw.range(0, p - 1);
  std::int64_t total = 0;
  std::int64_t lo = arc.lo, hi = arc.hi;
  if (lo < 0) {
    total += fw.range(lo + p, p - 1);
    lo = 0;
  }
  if (hi >= p) {
    total += fw.range(0, hi - p);
    hi = p - 1;
  }
  if (lo <= hi) total += fw.range(lo, hi);
  return total;
}

std::vector<int> cover_impl(const WordCtx& ctx) {
  const auto p = static_cast<std::int64_t>(ctx.size());
  std::vector<IndexArc> arcs(static_cast<std::size_t>(p));
  for (std::int64_t i = 0; i < p; ++i)
    arcs[static_cast<std::size_t>(i)] = ball_arc(ctx, i, ctx.eps, /*closed=*/true);

  Fenwick uncovered(p);
  // next uncovered index >= i, with path compression
  std::vector<std::int64_t> nxt(static_cast<std::size_t>(p) + 1);
  for (std::int64_t i = 0; i <= p; ++i) nxt[static_cast<std::size_t>(i)] = i;
  std::function<std::int64_t(std::int64_t)> find_next = [&](std::int64_t i) {
    while (nxt[static_cast<std::size_t>(i)] != i) {
      nxt[static_cast<std::size_t>(i)] =
          nxt[static_cast<std::size_t>(nxt[static_cast<std::size_t>(i)])];
      i = nxt[static_cast<std::size_t>(i)];
    }
    return i;
  };

  struct Entry {
    std::int64_t count;
    double sum;
    int idx;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count < b.count;
    if (a.sum != b.sum) return a.sum > b.sum;
    return a.idx > b.idx;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::int64_t i = 0; i < p; ++i)
    heap.push({arcs[static_cast<std::size_t>(i)].count(), ctx.S[i], static_cast<int>(i)});

  std::int64_t remaining = p;
  std::vector<int> chosen;
  auto mark_segment = [&](std::int64_t lo, std::int64_t hi) {
    std::int64_t i = find_next(lo);
    while (i <= hi) {
      uncovered.clear_point(i);
      nxt[static_cast<std::size_t>(i)] = i + 1;
      --remaining;
      i = find_next(i + 1);
    }
  };

  while (remaining > 0 && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    const IndexArc& arc = arcs[static_cast<std::size_t>(top.idx)];
    const std::int64_t now = circular_range_count(uncovered, arc, p);
    if (now <= 0) continue;
    if (now != top.count) {
      top.count = now;
      heap.push(top);
      continue;
    }
    chosen.push_back(top.idx);
    if (arc.count() >= p) {
      mark_segment(0, p - 1);
      continue;
    }
    std::int64_t lo = arc.lo, hi = arc.hi;
    if (lo < 0) {
      mark_segment(lo + p, p - 1);
      lo = 0;
    }
    if (hi >= p) {
      mark_segment(0, hi - p);
      hi = p - 1;
    }
    if (lo <= hi) mark_segment(lo, hi);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

double weighted_sum(const WordCtx& ctx, const std::vector<int>& idx) {
  double s = 0.0;
  for (int i : idx) s += std::exp(ctx.S[i]);
  return s;
}

}  // namespace

SampleCloud discretize(const RegionSpec& region, double h, std::uint64_t budget) {
  if (!(h > 0.0)) throw std::invalid_argument("discretize: resolution must be > 0");
  if (const auto* iv = std::get_if<IntervalRegion>(&region)) {
    if (!(iv->a >= 0.0 && iv->a < iv->b && iv->b <= 1.0))
      throw std::invalid_argument("IntervalRegion: need 0 <= a < b <= 1");
    const double span = iv->b - iv->a;
    auto count = static_cast<std::uint64_t>(std::ceil(span / h - 1e-9));
    if (count == 0) count = 1;
    if (count > budget) throw std::runtime_error("discretize: resolution budget exceeded");
    std::vector<double> pts(static_cast<std::size_t>(count));
    for (std::uint64_t k = 0; k < count; ++k)
      pts[static_cast<std::size_t>(k)] = iv->a + static_cast<double>(k) * h;
    return make_cloud(std::move(pts), h, region);
  }
  if (const auto* cr = std::get_if<CantorRegion>(&region)) {
    auto pts = cantor_midpoints(*cr, budget);
    // Midpoints are off the represented set by at most half a cylinder.
    double max_halfwidth = 0.0;
    {
      double w = 1.0;
      for (int k = 0; k < cr->depth; ++k) {
        double widest = 0.0;
        for (int j : cr->branches) {
          const auto [lo, hi] = branch_interval(cr->base, j);
          widest = std::max(widest, hi - lo);
        }
        w *= widest;
      }
      max_halfwidth = 0.5 * w;
    }
    return make_cloud(std::move(pts), std::max(max_halfwidth, 1e-300), region);
  }
  const auto& pl = std::get<PointsRegion>(region);
  if (pl.points.empty()) throw std::invalid_argument("PointsRegion: empty point list");
  for (double x : pl.points)
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("PointsRegion: points must be in [0,1)");
  return make_cloud(pl.points, h, region);
}

std::vector<int> maximal_separated(const SemigroupSystem& sys,
                                   const PotentialFamily& family,
                                   std::span<const Symbol> w, const SampleCloud& cloud,
                                   double eps) {
  WordCtx ctx(sys, family, w, cloud, eps);
  return separated_impl(ctx);
}

std::vector<int> greedy_cover(const SemigroupSystem& sys, const PotentialFamily& family,
                              std::span<const Symbol> w, const SampleCloud& cloud,
                              double eps) {
  WordCtx ctx(sys, family, w, cloud, eps);
  return cover_impl(ctx);
}

WordSets build_word_sets(const SemigroupSystem& sys, const PotentialFamily& family,
                         std::span<const Symbol> w, const SampleCloud& cloud, double eps,
                         bool with_spanning) {
  WordCtx ctx(sys, family, w, cloud, eps);
  WordSets out;
  out.separated = separated_impl(ctx);
  out.separated_sum = weighted_sum(ctx, out.separated);
  if (!with_spanning) return out;
  std::vector<int> cover = cover_impl(ctx);
  const double cover_sum = weighted_sum(ctx, cover);
  if (cover_sum <= out.separated_sum) {
    out.spanning = std::move(cover);
    out.spanning_sum = cover_sum;
  } else {
    out.spanning = out.separated;
    out.spanning_sum = out.separated_sum;
    out.spanning_is_separated_fallback = true;
  }
  return out;
}

std::vector<int> greedy_spanning(const SemigroupSystem& sys,
                                 const PotentialFamily& family, std::span<const Symbol> w,
                                 const SampleCloud& cloud, double eps) {
  return build_word_sets(sys, family, w, cloud, eps).spanning;
}

IndexArc ball_index_arc(const SemigroupSystem& sys, std::span<const Symbol> w,
                        const SampleCloud& cloud, int center, double radius) {
  WordCtx ctx(sys, zero_family(sys.m()), w, cloud, radius);
  return ball_arc(ctx, center, radius, /*closed=*/true);
}

}  // namespace semipress
