#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <variant>
#include <vector>

#include "semipress/systems.hpp"

namespace semipress {

struct IntervalRegion {
  double a = 0.0;
  double b = 1.0;
};

// Cylinders of the base map at the given depth, restricted to the allowed
// branches; discretize() takes their midpoints. Base must be piecewise affine.
struct CantorRegion {
  ConformalMap base;
  std::vector<int> branches;
  int depth = 1;
};

struct PointsRegion {
  std::vector<double> points;
};

using RegionSpec = std::variant<IntervalRegion, CantorRegion, PointsRegion>;

// Finite stand-in for the set Z: sorted points plus the resolution (max gap
// from any represented point to the cloud).
struct SampleCloud {
  Eigen::ArrayXd points;  // ascending
  double resolution = 0.0;
  RegionSpec source;

  Eigen::Index size() const { return points.size(); }
};

SampleCloud discretize(const RegionSpec& region, double h,
                       std::uint64_t budget = std::uint64_t{1} << 24);

// Greedy maximal (w, eps)-separated subset: candidates inserted in descending
// Birkhoff-sum order (ties by ascending index), kept when d_w >= eps to all
// accepted points. Returns ascending cloud indices.
std::vector<int> maximal_separated(const SemigroupSystem& sys,
                                   const PotentialFamily& family,
                                   std::span<const Symbol> w, const SampleCloud& cloud,
                                   double eps);

// Greedy set cover of the cloud by Bowen balls centred at cloud points:
// descending remaining-coverage count, ties by ascending Birkhoff sum then
// index. Returns ascending indices of the chosen centres.
std::vector<int> greedy_cover(const SemigroupSystem& sys, const PotentialFamily& family,
                              std::span<const Symbol> w, const SampleCloud& cloud,
                              double eps);

struct WordSets {
  std::vector<int> separated;
  std::vector<int> spanning;
  double separated_sum = 0.0;  // sum of e^{S_w Phi} over the separated set
  double spanning_sum = 0.0;
  bool spanning_is_separated_fallback = false;
};

// Builds both sets sharing one orbit pass. The spanning set is the greedy
// cover unless the separated set (itself spanning, by maximality) has the
// smaller weighted sum, in which case that is returned. with_spanning=false
// skips the cover entirely.
WordSets build_word_sets(const SemigroupSystem& sys, const PotentialFamily& family,
                         std::span<const Symbol> w, const SampleCloud& cloud, double eps,
                         bool with_spanning = true);

std::vector<int> greedy_spanning(const SemigroupSystem& sys,
                                 const PotentialFamily& family, std::span<const Symbol> w,
                                 const SampleCloud& cloud, double eps);

// Contiguous run of cloud indices around center whose points all satisfy
// d_w(center, .) <= radius; lo may be negative / hi >= size when the run
// wraps around the circle. Exposed for the cover-based pressure routines.
struct IndexArc {
  std::int64_t lo = 0;
  std::int64_t hi = -1;  // inclusive; empty when hi < lo
  std::int64_t count() const { return hi - lo + 1; }
};
IndexArc ball_index_arc(const SemigroupSystem& sys, std::span<const Symbol> w,
                        const SampleCloud& cloud, int center, double radius);

}  // namespace semipress
