#pragma once

#include <optional>
#include <string>

namespace semipress {

struct RunOptions {
  std::string command;
  std::string config_path;  // empty allowed for `acceptance`
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  bool verbose = false;
};

// Exit codes: 0 ok, 1 acceptance criterion failed, 2 config schema violation,
// 3 diagnostic flags on results (partial outputs written), 4 numerical abort.
int run_command(const RunOptions& opts);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace semipress
