#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semipress/fit.hpp"
#include "semipress/flags.hpp"
#include "semipress/sets.hpp"

namespace semipress {

// Limit schedule: word lengths N (ascending) and scales epsilon (descending).
// Words are enumerated exhaustively while m^N <= word_budget, otherwise
// mc_samples words are drawn per cell from the seed.
struct Schedule {
  std::vector<int> word_lengths;
  std::vector<double> epsilons;
  std::uint64_t word_budget = std::uint64_t{1} << 14;
  int mc_samples = 256;
  std::uint64_t seed = 0;
  double consistency_tol = 0.1;  // flag when the two finest scales disagree by more
  int mprime_extension = 2;      // extra word lengths allowed in center-of-ball covers
  double alpha_tol = 1e-3;       // bisection tolerance for the cover exponent
};

void validate(const Schedule& schedule);

enum class SumVariant { spanning, separated };
const char* variant_name(SumVariant v);

struct PartitionCell {
  std::string variant;
  int word_length = 0;
  double epsilon = 0.0;
  std::int64_t n_words = 0;
  double log_avg_sum = 0.0;
  double stderr_ = 0.0;  // standard error of log averaged sum (0 when exhaustive)
  bool resolved = true;
};

struct EpsilonFit {
  double epsilon = 0.0;
  LineFit fit;
  bool resolved = true;
};

// Slope of log(averaged partition sum) against N, per epsilon; value is the
// slope at the smallest resolved epsilon.
struct PressureEstimate {
  double value = 0.0;
  std::vector<PartitionCell> per_cell;
  std::vector<EpsilonFit> fits;
  std::string mode = "exhaustive";
  Flags flags;
};

struct WordPartitionSum {
  double sum = 0.0;
  int set_size = 0;
  bool separated_fallback = false;  // spanning only
};

// Q_w: sum of e^{S_w Phi} over the greedy spanning set (upper-bounds the inf).
WordPartitionSum partition_sum_spanning(const SemigroupSystem& sys,
                                        const PotentialFamily& family,
                                        const SampleCloud& cloud,
                                        std::span<const Symbol> w, double eps);
// P_w: sum over the greedy maximal separated set (lower-bounds the sup).
WordPartitionSum partition_sum_separated(const SemigroupSystem& sys,
                                         const PotentialFamily& family,
                                         const SampleCloud& cloud,
                                         std::span<const Symbol> w, double eps);

// Bowen balls shrink like e^{-N log a}; a cell is resolved when the cloud is
// finer than half the smallest ball at that (N, eps).
bool cell_resolved(const SemigroupSystem& sys, const SampleCloud& cloud, int n,
                   double eps);

struct CellSums {
  std::vector<double> values;  // per word (exhaustive order or sample order)
  std::vector<int> sizes;
  bool exhaustive = true;
  std::int64_t n_words = 0;
};

CellSums cell_word_sums(const SemigroupSystem& sys, const PotentialFamily& family,
                        const SampleCloud& cloud, int n, double eps,
                        const Schedule& schedule, SumVariant variant, int threads = 1);

struct AveragedPartition {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_words = 0;
  bool exhaustive = true;
  bool resolved = true;
};

// (1/m^n) sum over words (exact) or an unbiased Monte-Carlo mean.
AveragedPartition averaged_partition(const SemigroupSystem& sys,
                                     const PotentialFamily& family,
                                     const SampleCloud& cloud, int n, double eps,
                                     const Schedule& schedule, SumVariant variant,
                                     int threads = 1);

// Shared assembly: value = slope at the smallest resolved epsilon, flags for
// unresolved schedules and for disagreement between the two finest scales.
PressureEstimate assemble_pressure_estimate(const std::vector<PartitionCell>& cells,
                                            const std::vector<EpsilonFit>& fits,
                                            bool exhaustive, double consistency_tol);

PressureEstimate capacity_pressure(const SemigroupSystem& sys,
                                   const PotentialFamily& family,
                                   const SampleCloud& cloud, const Schedule& schedule,
                                   SumVariant variant = SumVariant::separated,
                                   int threads = 1);

PressureEstimate entropy(const SemigroupSystem& sys, const SampleCloud& cloud,
                         const Schedule& schedule, int threads = 1);

// Center-of-ball construction: greedy weighted covers by Bowen balls with word
// lengths in [N, N+L]; the estimate is the alpha where the averaged cover
// weight crosses 1 at the largest N, reported at the smallest resolved delta.
PressureEstimate caratheodory_pressure(const SemigroupSystem& sys,
                                       const PotentialFamily& family,
                                       const SampleCloud& cloud,
                                       const Schedule& schedule, int threads = 1);

// Per-word sandwich Q_w(eps) <= P_w(eps) <= e^{n*modulus} Q_w(eps/2).
struct SandwichCell {
  int word_length = 0;
  double epsilon = 0.0;
  double modulus = 0.0;
  bool holds = true;
  double max_violation = 0.0;
};
SandwichCell sandwich_cell(const SemigroupSystem& sys, const PotentialFamily& family,
                           const SampleCloud& cloud, int n, double eps,
                           const Schedule& schedule, int threads = 1);

}  // namespace semipress
