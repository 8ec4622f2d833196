#pragma once

#include <Eigen/Core>
#include <variant>
#include <vector>

#include "semipress/words.hpp"

namespace semipress {

enum class MetricMode { circle, interval };

// x -> k x (mod 1), integer slope k >= 2.
struct LinearMod1 {
  int slope = 2;
};

// x -> x + x^{1+s} (mod 1), s in (0,1). Indifferent fixed point at 0:
// f(0) = 0 and a(0) = 1.
struct MannevillePomeau {
  double s = 0.5;
};

// Full-branch piecewise linear map: branch j lives on [cuts[j], cuts[j+1])
// with slope slopes[j] and maps onto [0,1). Branch widths are 1/slope, so
// sum(1/slopes) must be 1. Cut points belong to the branch on their right.
struct PiecewiseLinearFull {
  std::vector<double> slopes;
  std::vector<double> cuts;  // size slopes.size()+1, cuts.front()=0, cuts.back()=1

  explicit PiecewiseLinearFull(std::vector<double> branch_slopes);
  int branch_of(double x) const;
};

using ConformalMap = std::variant<LinearMod1, MannevillePomeau, PiecewiseLinearFull>;

struct Zero {};
struct Constant {
  double value = 0.0;
};
// phi_i(x) = coefficient * log a_i(x).
struct ScaledLogFactor {
  double coefficient = 0.0;
};
using Potential = std::variant<Zero, Constant, ScaledLogFactor>;
using PotentialFamily = std::vector<Potential>;

// The tuple (G, Phi): m conformal maps with their factors, m potentials,
// and the base metric. Immutable after construction; all evaluations pure.
struct SemigroupSystem {
  Alphabet alphabet;
  std::vector<ConformalMap> maps;
  PotentialFamily potentials;
  MetricMode metric = MetricMode::circle;

  int m() const { return alphabet.m; }
};

SemigroupSystem make_system(std::vector<ConformalMap> maps, PotentialFamily potentials,
                            MetricMode metric = MetricMode::circle);
// Same potential kind for every generator.
SemigroupSystem make_system(std::vector<ConformalMap> maps, const Potential& shared,
                            MetricMode metric = MetricMode::circle);

PotentialFamily family_of(const Potential& shared, int m);
PotentialFamily zero_family(int m);

double apply_map(const ConformalMap& f, double x);
double map_factor(const ConformalMap& f, double x);
// Number of full branches (degree of the circle covering).
int branch_count(const ConformalMap& f);
// Branch j as [lo, hi); requires a piecewise-affine map.
std::pair<double, double> branch_interval(const ConformalMap& f, int j);

double apply_generator(const SemigroupSystem& sys, int i, double x);
double factor(const SemigroupSystem& sys, int i, double x);
double potential_value(const SemigroupSystem& sys, const PotentialFamily& family, int i,
                       double x);
double potential_value(const SemigroupSystem& sys, int i, double x);

double base_distance(const SemigroupSystem& sys, double x, double y);
inline double circle_distance(double x, double y) {
  double d = x - y;
  if (d < 0) d = -d;
  return d > 0.5 ? 1.0 - d : d;
}

// In-place f_i over a whole cloud.
void apply_generator_inplace(const SemigroupSystem& sys, int i,
                             Eigen::Ref<Eigen::ArrayXd> x);

// max_i sup_x |phi_i(x) - psi_i(x)|, sup over a dense grid on [0,1).
double potential_sup_distance(const SemigroupSystem& sys, const PotentialFamily& phi,
                              const PotentialFamily& psi, int grid_points = 4096);

// Modulus of continuity: max_i sup { |phi_i(x)-phi_i(y)| : d(x,y) <= delta },
// estimated on a dense grid. Exact (zero) for Zero/Constant kinds.
double potential_modulus(const SemigroupSystem& sys, const PotentialFamily& phi,
                         double delta, int grid_points = 4096);

// True when every factor is >= 1 everywhere (checked on a dense grid, and
// analytically for the built-in families).
bool factors_at_least_one(const SemigroupSystem& sys, int grid_points = 4096);

}  // namespace semipress
