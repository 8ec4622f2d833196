#include "semipress/config.hpp"

namespace semipress {

namespace {

double require_number(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require_field(j, key, path);
  if (!v.is_number()) throw ConfigError(path + "/" + key + ": expected a number");
  return v.get<double>();
}

std::vector<double> require_number_list(const Json& j, const std::string& key,
                                        const std::string& path) {
  const Json& v = require_field(j, key, path);
  if (!v.is_array() || v.empty())
    throw ConfigError(path + "/" + key + ": expected a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path + "/" + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

const Json& require_field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(path + "/" + key + ": missing required field");
  return j.at(key);
}

Potential parse_potential(const Json& j, const std::string& path) {
  const std::string kind = require_field(j, "kind", path).get<std::string>();
  if (kind == "zero") return Zero{};
  if (kind == "constant") return Constant{require_number(j, "value", path)};
  if (kind == "scaled_log_factor")
    return ScaledLogFactor{require_number(j, "coefficient", path)};
  throw ConfigError(path + "/kind: unknown potential kind '" + kind + "'");
}

ConformalMap parse_map(const Json& j, const std::string& path) {
  const std::string kind = require_field(j, "kind", path).get<std::string>();
  if (kind == "linear_mod1") {
    const double slope = require_number(j, "slope", path);
    if (slope != std::floor(slope) || slope < 2)
      throw ConfigError(path + "/slope: linear_mod1 slope must be an integer >= 2");
    return LinearMod1{static_cast<int>(slope)};
  }
  if (kind == "manneville_pomeau") {
    const double s = require_number(j, "s", path);
    if (!(s > 0.0 && s < 1.0))
      throw ConfigError(path + "/s: manneville_pomeau exponent must lie in (0,1)");
    return MannevillePomeau{s};
  }
  if (kind == "piecewise_linear_full") {
    auto slopes = require_number_list(j, "slopes", path);
    try {
      return PiecewiseLinearFull{std::move(slopes)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + "/slopes: " + e.what());
    }
  }
  throw ConfigError(path + "/kind: unknown map kind '" + kind + "'");
}

SemigroupSystem parse_system(const Json& root) {
  const Json& sysj = require_field(root, "system", "");
  const Json& mapsj = require_field(sysj, "maps", "/system");
  if (!mapsj.is_array() || mapsj.empty())
    throw ConfigError("/system/maps: expected a nonempty array");
  std::vector<ConformalMap> maps;
  for (std::size_t i = 0; i < mapsj.size(); ++i)
    maps.push_back(parse_map(mapsj[i], "/system/maps/" + std::to_string(i)));

  MetricMode metric = MetricMode::circle;
  if (sysj.contains("metric")) {
    const std::string m = sysj.at("metric").get<std::string>();
    if (m == "circle") metric = MetricMode::circle;
    else if (m == "interval") metric = MetricMode::interval;
    else throw ConfigError("/system/metric: expected 'circle' or 'interval'");
  }

  PotentialFamily family;
  if (root.contains("potentials")) {
    const Json& pj = root.at("potentials");
    if (!pj.is_array() || pj.size() != maps.size())
      throw ConfigError("/potentials: expected one potential per map");
    for (std::size_t i = 0; i < pj.size(); ++i)
      family.push_back(parse_potential(pj[i], "/potentials/" + std::to_string(i)));
  } else if (root.contains("potential")) {
    family = family_of(parse_potential(root.at("potential"), "/potential"),
                       static_cast<int>(maps.size()));
  } else {
    family = zero_family(static_cast<int>(maps.size()));
  }
  try {
    return make_system(std::move(maps), std::move(family), metric);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("/system: ") + e.what());
  }
}

RegionSpec parse_region(const Json& root) {
  const Json& j = require_field(root, "region", "");
  const std::string kind = require_field(j, "kind", "/region").get<std::string>();
  if (kind == "interval") {
    return IntervalRegion{require_number(j, "a", "/region"),
                          require_number(j, "b", "/region")};
  }
  if (kind == "cantor") {
    CantorRegion r{parse_map(require_field(j, "map", "/region"), "/region/map"), {}, 0};
    const Json& bj = require_field(j, "branches", "/region");
    if (!bj.is_array() || bj.empty())
      throw ConfigError("/region/branches: expected a nonempty array");
    for (const auto& b : bj) r.branches.push_back(b.get<int>());
    r.depth = static_cast<int>(require_number(j, "depth", "/region"));
    return r;
  }
  if (kind == "points") {
    PointsRegion r;
    r.points = require_number_list(j, "points", "/region");
    return r;
  }
  throw ConfigError("/region/kind: unknown region kind '" + kind + "'");
}

double parse_resolution(const Json& root) {
  const double h = require_number(root, "resolution", "");
  if (!(h > 0.0)) throw ConfigError("/resolution: must be > 0");
  return h;
}

Schedule parse_schedule(const Json& root) {
  const Json& j = require_field(root, "schedule", "");
  Schedule s;
  s.word_lengths.clear();
  for (double n : require_number_list(j, "word_lengths", "/schedule"))
    s.word_lengths.push_back(static_cast<int>(n));
  s.epsilons = require_number_list(j, "epsilons", "/schedule");
  s.seed = static_cast<std::uint64_t>(require_number(j, "seed", "/schedule"));
  if (j.contains("word_budget"))
    s.word_budget = j.at("word_budget").get<std::uint64_t>();
  if (j.contains("mc_samples")) s.mc_samples = j.at("mc_samples").get<int>();
  if (j.contains("consistency_tol")) s.consistency_tol = j.at("consistency_tol").get<double>();
  if (j.contains("mprime_extension")) s.mprime_extension = j.at("mprime_extension").get<int>();
  if (j.contains("alpha_tol")) s.alpha_tol = j.at("alpha_tol").get<double>();
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("/schedule: ") + e.what());
  }
  return s;
}

MeasureModel parse_measure(const Json& root, std::uint64_t default_seed) {
  if (!root.contains("measure")) return lebesgue_measure(1'000'000, default_seed);
  const Json& j = root.at("measure");
  const std::string kind = require_field(j, "kind", "/measure").get<std::string>();
  MeasureModel mu;
  mu.seed = default_seed;
  if (j.contains("sample_budget")) mu.sample_budget = j.at("sample_budget").get<std::int64_t>();
  if (mu.sample_budget < 1000)
    throw ConfigError("/measure/sample_budget: must be >= 1000");
  if (kind == "lebesgue") {
    mu.kind = LebesgueCircle{};
    return mu;
  }
  if (kind == "empirical") {
    EmpiricalOrbit e;
    e.atoms = require_number_list(j, "atoms", "/measure");
    mu.kind = std::move(e);
    return mu;
  }
  if (kind == "bernoulli") {
    BernoulliCylinder b{parse_map(require_field(j, "map", "/measure"), "/measure/map"),
                        require_number_list(j, "weights", "/measure"), 40};
    if (static_cast<int>(b.weights.size()) != branch_count(b.base))
      throw ConfigError("/measure/weights: expected one weight per branch");
    double sum = 0.0;
    for (double w : b.weights) {
      if (w < 0.0) throw ConfigError("/measure/weights: weights must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError("/measure/weights: weights must sum to 1");
    mu.kind = std::move(b);
    return mu;
  }
  throw ConfigError("/measure/kind: unknown measure kind '" + kind + "'");
}

}  // namespace semipress
