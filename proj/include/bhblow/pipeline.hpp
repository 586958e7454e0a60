#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhblow/config.hpp"
#include "bhblow/evolve.hpp"
#include "bhblow/selfsim.hpp"
#include "bhblow/verify.hpp"

namespace bhblow {

namespace fs = std::filesystem;

/// Initial field for a configuration (profile data, the two-mode small
/// amplitude data, or a stored snapshot).
Field make_initial(const RunConfig& c);

/// ε [2 cos x + cos 2(x + 2π²)].
Field small_amplitude_data(const GridPtr& grid, double eps);

struct RunData {
  RunConfig config;
  RunResult result;
  double wall_seconds = 0.0;
};

/// Writes config.json, timeseries.csv, snap_NNN.bhf and evolve.json.
void write_evolution(const fs::path& dir, const RunData& run);
/// Inverse of write_evolution.
RunData load_run(const fs::path& dir);

struct FrameSet {
  ModulationTrack track;
  std::vector<SelfSimilarFrame> frames;
  std::vector<std::string> skipped;  // one line per snapshot that gave no frame
};

FrameSet compute_frames(const RunData& run, const FrameOptions& opt);

// Analysis stages. Each writes its artifact(s) into `dir`; when the analysis
// cannot be carried out the JSON file records {"available": false, "reason"}.
void stage_selfsim(const fs::path& dir, const RunData& run, const FrameSet& fs);
void stage_bootstrap(const fs::path& dir, const RunData& run, const FrameSet& fs, const BootstrapConfig& cfg);
void stage_lagrangian(const fs::path& dir, const RunData& run, const FrameSet& fs);
void stage_interpolation(const fs::path& dir, const RunData& run);
void stage_rate(const fs::path& dir, const RunData& run);
/// Closed-form comparison for the linear mode and the characteristics
/// prediction for the Burgers mode; nothing for the full equation.
void stage_oracle(const fs::path& dir, const RunData& run);

/// Assemble report.json from whatever artifacts exist in `dir`.
nlohmann::json write_report(const fs::path& dir);

/// Human-readable bootstrap table.
std::string bootstrap_table(const BootstrapReport& rep);

/// Full pipeline. Returns the process exit status: 0 ok, 3 when no frame
/// could be extracted. Configuration and numeric errors propagate.
int run_experiment(const RunConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  std::size_t n = 0;
  double half_width = 0.0;
  int status = 0;
  std::string error;
  std::optional<double> tstar, nu_hat, cusp;
  std::optional<std::size_t> bootstrap_failed;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<double> tstar_slope;  // d log|T*| / d log ε over successful rows
};

/// Configuration used for one sweep member: ε replaced, geometry widened
/// until ε^{3/2} <= cutoff_inner/10, n scaled to keep dx·ε^{-3/2} fixed.
RunConfig sweep_member(const RunConfig& tmpl, double eps);

/// Runs every member (concurrently, up to `jobs` at a time), isolating
/// failures, and writes sweep.csv and sweep.json under tmpl.output.
SweepResult sweep(const RunConfig& tmpl, const std::vector<double>& eps, unsigned jobs = 0);

}  // namespace bhblow
