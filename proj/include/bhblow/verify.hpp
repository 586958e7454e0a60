#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bhblow/evolve.hpp"
#include "bhblow/grid.hpp"
#include "bhblow/selfsim.hpp"

namespace bhblow {

struct BootstrapConfig {
  double M = 50.0;
  double epsilon = 1e-2;
  /// Derivatives of order 4 and 5 are checked only while m^{-3/2} >= gate*dx.
  double high_derivative_gate = 32.0;

  double l() const;                  // (log M)^{-2}
  double L_of_s(double s) const;     // e^{3s/2}/2
};

void validate(const BootstrapConfig& cfg);

enum class CheckStatus { pass, fail, unchecked };
std::string to_string(CheckStatus s);

struct BootstrapItem {
  std::string id;
  std::string region;  // near, at-0, middle, far, global, modulation
  std::string description;
  double worst_margin = 0.0;  // (bound - measured)/bound, minimum over all points
  double worst_X = 0.0;
  double worst_s = 0.0;
  std::size_t points = 0;
  CheckStatus status = CheckStatus::unchecked;
  std::string reason;  // for unchecked items
};

struct BootstrapReport {
  std::vector<BootstrapItem> items;
  std::size_t passed() const;
  std::size_t failed() const;
  std::size_t unchecked() const;
  const BootstrapItem* find(const std::string& id) const;
};

/// The complete list of inequality identifiers, in report order.
const std::vector<std::string>& bootstrap_ids();

/// Evaluate every bootstrap inequality on every frame. `tstar` enters the
/// blowup-time bound when available.
BootstrapReport check_bootstrap(const std::vector<SelfSimilarFrame>& frames, const ModulationTrack& track,
                                const BootstrapConfig& cfg, std::optional<double> tstar = std::nullopt);

struct InterpolationItem {
  std::string id;
  int j = 0;              // derivative order on the left
  double lhs = 0.0;       // ||∂ʲ u||
  double rhs = 0.0;       // ||∂u||^{1-θ} ||∂⁵u||^{θ}
  double margin = 0.0;    // 1 - lhs/rhs
};

struct InterpolationReport {
  std::vector<InterpolationItem> items;
  bool all_hold(double tol = 0.0) const;
};

/// ||∂ʲu|| <= ||∂u||^{(5-j)/4} ||∂⁵u||^{(j-1)/4} for j = 2, 3, 4.
InterpolationReport check_interpolation(const Field& u);

struct RateReport {
  double product_min = 0.0, product_max = 0.0;  // m (T* - t) over the final decade
  bool product_ok = false;
  double h5_slope = 0.0;  // d log ||u||_{H^5} / d log (T* - t) over snapshots
  std::size_t h5_points = 0;
  bool h5_ok = false;
};

RateReport check_blowup_rate_bound(const TimeSeries& series, double tstar,
                                   const std::vector<Snapshot>& snapshots = {});

double h5_norm(const Field& u);

}  // namespace bhblow
