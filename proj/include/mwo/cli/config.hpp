#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mwo/error.hpp"
#include "mwo/fwm/spinor_fwm.hpp"
#include "mwo/holo/hologram.hpp"
#include "mwo/pamp/parametric_amp.hpp"

namespace mwo::cli {

// Bad configuration. `key` is "section.key" (or a section name) when known.
class ConfigError : public PreconditionError {
 public:
  ConfigError(std::string key, const std::string& msg)
      : PreconditionError(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Kind { fwm, pamp, holo };
std::string kind_name(Kind k);

// section -> key -> value, as written
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

struct SweepAxis {
  std::string section, key;
  std::vector<std::string> values;
};

struct FwmJob {
  fwm::FWMScenario scenario;
};

struct PampJob {
  enum class Mode { series, crossover } mode = Mode::series;
  pamp::ThreeModeParams params;
  std::array<pamp::Complex, 3> alpha{};  // initial coherent amplitudes of (a, c+, c-)
  std::vector<double> grid;            // omega_r t
  std::vector<pamp::Complex> alphas;   // crossover probe amplitudes
  double tau = 1.0;                    // crossover evaluation time
};

struct HoloJob {
  holo::RectHologramScenario scenario;
};

struct ScenarioPoint {
  std::string base_name;  // <name> or <name>__k=v__...
  std::vector<std::pair<std::string, std::string>> overrides;  // key=value labels
  std::variant<FwmJob, PampJob, HoloJob> job;
};

struct ScenarioConfig {
  std::string source;  // exact config bytes, for the manifest hash
  Kind kind = Kind::fwm;
  std::string name;
  std::string output_dir = ".";
  bool field_binary = false;
  RawConfig raw;
  std::vector<SweepAxis> sweep;
  std::vector<ScenarioPoint> points;  // Cartesian product, first axis slowest
};

// Parses, expands the sweep and validates every point against the module
// preconditions. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
// Reads the file first; an unreadable file is an I/O error (std::ios_base::failure).
ScenarioConfig load_config(const std::string& path);

// Numbers accept a trailing "pi" factor: "2pi", "0.5 pi", "pi".
double parse_real(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);
std::vector<std::string> split_list(const std::string& value);

}  // namespace mwo::cli
