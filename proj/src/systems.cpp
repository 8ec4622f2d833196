#include "semipress/systems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semipress {

namespace {

double mod1(double y) {
  y -= std::floor(y);
  if (y >= 1.0) y = 0.0;  // guard against rounding to exactly 1
  return y;
}

}  // namespace

PiecewiseLinearFull::PiecewiseLinearFull(std::vector<double> branch_slopes)
    : slopes(std::move(branch_slopes)) {
  if (slopes.empty()) throw std::invalid_argument("PiecewiseLinearFull: no branches");
  double width_sum = 0.0;
  for (double k : slopes) {
    if (!(k > 0.0)) throw std::invalid_argument("PiecewiseLinearFull: slopes must be > 0");
    width_sum += 1.0 / k;
  }
  if (std::abs(width_sum - 1.0) > 1e-9)
    throw std::invalid_argument("PiecewiseLinearFull: branch widths 1/slope must sum to 1");
  cuts.resize(slopes.size() + 1);
  cuts.front() = 0.0;
  for (std::size_t j = 0; j < slopes.size(); ++j) cuts[j + 1] = cuts[j] + 1.0 / slopes[j];
  cuts.back() = 1.0;
}

int PiecewiseLinearFull::branch_of(double x) const {
  // Cut points resolve to the branch starting at them.
  auto it = std::upper_bound(cuts.begin(), cuts.end(), x);
  int j = static_cast<int>(it - cuts.begin()) - 1;
  if (j < 0) j = 0;
  if (j >= static_cast<int>(slopes.size())) j = static_cast<int>(slopes.size()) - 1;
  return j;
}

double apply_map(const ConformalMap& f, double x) {
  return std::visit(
      [x](const auto& map) -> double {
        using T = std::decay_t<decltype(map)>;
        if constexpr (std::is_same_v<T, LinearMod1>) {
          return mod1(static_cast<double>(map.slope) * x);
        } else if constexpr (std::is_same_v<T, MannevillePomeau>) {
          return mod1(x + std::pow(x, 1.0 + map.s));
        } else {
          const int j = map.branch_of(x);
          return mod1((x - map.cuts[static_cast<std::size_t>(j)]) *
                      map.slopes[static_cast<std::size_t>(j)]);
        }
      },
      f);
}

double map_factor(const ConformalMap& f, double x) {
  return std::visit(
      [x](const auto& map) -> double {
        using T = std::decay_t<decltype(map)>;
        if constexpr (std::is_same_v<T, LinearMod1>) {
          return static_cast<double>(map.slope);
        } else if constexpr (std::is_same_v<T, MannevillePomeau>) {
          return 1.0 + (1.0 + map.s) * std::pow(x, map.s);
        } else {
          return map.slopes[static_cast<std::size_t>(map.branch_of(x))];
        }
      },
      f);
}

int branch_count(const ConformalMap& f) {
  return std::visit(
      [](const auto& map) -> int {
        using T = std::decay_t<decltype(map)>;
        if constexpr (std::is_same_v<T, LinearMod1>) {
          return map.slope;
        } else if constexpr (std::is_same_v<T, MannevillePomeau>) {
          return 2;  // x + x^{1+s} wraps once
        } else {
          return static_cast<int>(map.slopes.size());
        }
      },
      f);
}

std::pair<double, double> branch_interval(const ConformalMap& f, int j) {
  return std::visit(
      [j](const auto& map) -> std::pair<double, double> {
        using T = std::decay_t<decltype(map)>;
        if constexpr (std::is_same_v<T, LinearMod1>) {
          if (j < 0 || j >= map.slope)
            throw std::out_of_range("branch_interval: branch index");
          const double w = 1.0 / map.slope;
          return {j * w, (j + 1) * w};
        } else if constexpr (std::is_same_v<T, MannevillePomeau>) {
          throw std::invalid_argument("branch_interval: map is not piecewise affine");
        } else {
          if (j < 0 || j >= static_cast<int>(map.slopes.size()))
            throw std::out_of_range("branch_interval: branch index");
          return {map.cuts[static_cast<std::size_t>(j)],
                  map.cuts[static_cast<std::size_t>(j) + 1]};
        }
      },
      f);
}

SemigroupSystem make_system(std::vector<ConformalMap> maps, PotentialFamily potentials,
                            MetricMode metric) {
  if (maps.empty()) throw std::invalid_argument("make_system: no maps");
  if (maps.size() != potentials.size())
    throw std::invalid_argument("make_system: maps and potentials must have equal size");
  for (const auto& f : maps) {
    if (const auto* lin = std::get_if<LinearMod1>(&f); lin && lin->slope < 2)
      throw std::invalid_argument("LinearMod1: slope must be an integer >= 2");
    if (const auto* mp = std::get_if<MannevillePomeau>(&f);
        mp && !(mp->s > 0.0 && mp->s < 1.0))
      throw std::invalid_argument("MannevillePomeau: s must lie in (0,1)");
  }
  SemigroupSystem sys{Alphabet(static_cast<int>(maps.size())), std::move(maps),
                      std::move(potentials), metric};
  return sys;
}

SemigroupSystem make_system(std::vector<ConformalMap> maps, const Potential& shared,
                            MetricMode metric) {
  const int m = static_cast<int>(maps.size());
  return make_system(std::move(maps), family_of(shared, m), metric);
}

PotentialFamily family_of(const Potential& shared, int m) {
  return PotentialFamily(static_cast<std::size_t>(m), shared);
}

PotentialFamily zero_family(int m) { return family_of(Zero{}, m); }

double apply_generator(const SemigroupSystem& sys, int i, double x) {
  if (i < 0 || i >= sys.m()) throw std::out_of_range("apply_generator: symbol out of range");
  return apply_map(sys.maps[static_cast<std::size_t>(i)], x);
}

double factor(const SemigroupSystem& sys, int i, double x) {
  if (i < 0 || i >= sys.m()) throw std::out_of_range("factor: symbol out of range");
  return map_factor(sys.maps[static_cast<std::size_t>(i)], x);
}

double potential_value(const SemigroupSystem& sys, const PotentialFamily& family, int i,
                       double x) {
  const auto& phi = family[static_cast<std::size_t>(i)];
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return p.value;
        } else {
          return p.coefficient * std::log(factor(sys, i, x));
        }
      },
      phi);
}

double potential_value(const SemigroupSystem& sys, int i, double x) {
  return potential_value(sys, sys.potentials, i, x);
}

double base_distance(const SemigroupSystem& sys, double x, double y) {
  if (sys.metric == MetricMode::circle) return circle_distance(x, y);
  return std::abs(x - y);
}

void apply_generator_inplace(const SemigroupSystem& sys, int i,
                             Eigen::Ref<Eigen::ArrayXd> x) {
  const auto& f = sys.maps[static_cast<std::size_t>(i)];
  if (const auto* lin = std::get_if<LinearMod1>(&f)) {
    const double k = lin->slope;
    x = (x * k);
    x -= x.floor();
    x = (x >= 1.0).select(0.0, x);
    return;
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = apply_map(f, x[j]);
}

double potential_sup_distance(const SemigroupSystem& sys, const PotentialFamily& phi,
                              const PotentialFamily& psi, int grid_points) {
  if (phi.size() != psi.size() || phi.size() != static_cast<std::size_t>(sys.m()))
    throw std::invalid_argument("potential_sup_distance: family size mismatch");
  double sup = 0.0;
  for (int i = 0; i < sys.m(); ++i) {
    for (int g = 0; g < grid_points; ++g) {
      const double x = static_cast<double>(g) / grid_points;
      sup = std::max(sup, std::abs(potential_value(sys, phi, i, x) -
                                   potential_value(sys, psi, i, x)));
    }
  }
  return sup;
}

double potential_modulus(const SemigroupSystem& sys, const PotentialFamily& phi,
                         double delta, int grid_points) {
  bool any_scaled = false;
  for (const auto& p : phi)
    if (std::holds_alternative<ScaledLogFactor>(p)) any_scaled = true;
  if (!any_scaled) return 0.0;
  const int span = std::max(1, static_cast<int>(std::ceil(delta * grid_points)));
  double mod = 0.0;
  for (int i = 0; i < sys.m(); ++i) {
    if (!std::holds_alternative<ScaledLogFactor>(phi[static_cast<std::size_t>(i)])) continue;
    std::vector<double> vals(static_cast<std::size_t>(grid_points));
    for (int g = 0; g < grid_points; ++g)
      vals[static_cast<std::size_t>(g)] =
          potential_value(sys, phi, i, static_cast<double>(g) / grid_points);
    for (int g = 0; g < grid_points; ++g) {
      for (int d = 1; d <= span; ++d) {
        int h = g + d;
        if (sys.metric == MetricMode::circle) h %= grid_points;
        else if (h >= grid_points) break;
        mod = std::max(mod, std::abs(vals[static_cast<std::size_t>(g)] -
                                     vals[static_cast<std::size_t>(h)]));
      }
    }
  }
  return mod;
}

bool factors_at_least_one(const SemigroupSystem& sys, int grid_points) {
  for (int i = 0; i < sys.m(); ++i) {
    const auto& f = sys.maps[static_cast<std::size_t>(i)];
    if (std::holds_alternative<LinearMod1>(f)) continue;        // slope >= 2
    if (std::holds_alternative<MannevillePomeau>(f)) continue;  // a = 1 + (1+s)x^s >= 1
    for (int g = 0; g < grid_points; ++g)
      if (map_factor(f, static_cast<double>(g) / grid_points) < 1.0) return false;
  }
  return true;
}

}  // namespace semipress
