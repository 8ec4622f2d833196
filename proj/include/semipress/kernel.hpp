#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "semipress/systems.hpp"
#include "semipress/words.hpp"

namespace semipress {

// Orbit and Birkhoff-sum conventions: a word w = i_1 i_2 ... i_n is applied
// in reading order, i_1 first. The orbit segment is
//   [x, f_{i_1} x, f_{i_2 i_1} x, ..., f_{i_n ... i_1} x]   (|w|+1 points),
// and the Birkhoff sum weighs the first |w| points:
//   S_w Phi(x) = phi_{i_1}(x) + phi_{i_2}(f_{i_1} x) + ... .
// The Bowen metric d_w takes the max of base distances over all |w|+1
// orbit-point pairs (the empty suffix, i.e. the points themselves, included).

std::vector<double> orbit_segment(const SemigroupSystem& sys, std::span<const Symbol> w,
                                  double x);

double birkhoff_sum(const SemigroupSystem& sys, const PotentialFamily& family,
                    std::span<const Symbol> w, double x);
double birkhoff_sum(const SemigroupSystem& sys, std::span<const Symbol> w, double x);

double bowen_distance(const SemigroupSystem& sys, std::span<const Symbol> w, double x,
                      double y);

// d_w(x, y) <= delta (closed ball).
bool in_bowen_ball(const SemigroupSystem& sys, std::span<const Symbol> w, double x,
                   double delta, double y);

// True as soon as d_w(x, y) >= bound; cheaper than computing d_w exactly.
bool bowen_distance_at_least(const SemigroupSystem& sys, std::span<const Symbol> w,
                             double x, double y, double bound);

// Column j holds the orbit segment of points[j]; (|w|+1) x n, column-major.
Eigen::ArrayXXd orbit_matrix(const SemigroupSystem& sys, std::span<const Symbol> w,
                             const Eigen::ArrayXd& points);

// S_w Phi over a cloud.
Eigen::ArrayXd birkhoff_sums(const SemigroupSystem& sys, const PotentialFamily& family,
                             std::span<const Symbol> w, const Eigen::ArrayXd& points);

// d_w between columns j and k of an orbit matrix, with early exit at bound.
double column_bowen_distance(const SemigroupSystem& sys, const Eigen::ArrayXXd& orbits,
                             Eigen::Index j, Eigen::Index k);
bool column_distance_at_least(const SemigroupSystem& sys, const Eigen::ArrayXXd& orbits,
                              Eigen::Index j, Eigen::Index k, double bound);

}  // namespace semipress
