#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "semipress/local_measure.hpp"
#include "semipress/pressure.hpp"
#include "semipress/sets.hpp"
#include "semipress/systems.hpp"

namespace semipress {

using Json = nlohmann::json;

// Schema violation; the message carries the JSON path of the offender.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

const Json& require_field(const Json& j, const std::string& key, const std::string& path);

Potential parse_potential(const Json& j, const std::string& path);
ConformalMap parse_map(const Json& j, const std::string& path);
SemigroupSystem parse_system(const Json& root);
RegionSpec parse_region(const Json& root);
double parse_resolution(const Json& root);
Schedule parse_schedule(const Json& root);
MeasureModel parse_measure(const Json& root, std::uint64_t default_seed);

}  // namespace semipress
