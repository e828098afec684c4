#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "mwo/cli/config.hpp"

namespace mwo::cli {

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides [output] dir
  int workers = 1;
  std::optional<long long> seed;       // reserved; recorded only
};

std::string tool_version();

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Runs every point of the config, writes CSVs and manifest.json into the
// output directory and returns the manifest. Points run on a worker pool;
// each point is computed by one worker, so bytes do not depend on the pool.
nlohmann::json run(const ScenarioConfig& cfg, const RunOptions& opt);

}  // namespace mwo::cli
