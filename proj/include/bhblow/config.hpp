#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhblow/evolve.hpp"
#include "bhblow/initial_data.hpp"
#include "bhblow/selfsim.hpp"
#include "bhblow/verify.hpp"

namespace bhblow {

/// What the initial state is built from.
enum class InitialKind {
  profile,          // rescaled Ū with plateau cutoff (initial_data module)
  small_amplitude,  // eps [2 cos x + cos 2(x + 2π²)] on a 2π-periodic box
  file,             // snapshot given by data_file
};

struct RunConfig {
  std::string name = "custom";
  std::size_t n = 262144;
  double half_width = 0.625;
  InitialKind initial = InitialKind::profile;
  std::string data_file;
  DataSpec data{1e-2, 50.0, 0.0625, 0.125, 0.0, 0.0, 1};
  /// Start time; defaults to -epsilon for profile data and 0 otherwise.
  double t0 = -1e-2;
  /// Guard 16: frames with fewer cells per inner length lose accuracy fast.
  StepControl step{.resolution_guard = 16.0, .snapshot_ratio = 1.25};
  Mode mode = Mode::full;
  FrameOptions frames;
  BootstrapConfig bootstrap;
  std::string output = "runs/run";
};

nlohmann::json to_json(const RunConfig& c);
/// Strict parse: unknown keys and out-of-range values raise ConfigError
/// naming the field.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& c, const std::filesystem::path& path);
void validate(const RunConfig& c);

/// Names accepted by preset().
std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

}  // namespace bhblow
