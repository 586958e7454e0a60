#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bhblow/error.hpp"
#include "bhblow/grid.hpp"
#include "bhblow/snapshot.hpp"

namespace bhblow {

enum class Mode { full, burgers_only, linear_only };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct PhysState {
  double t = 0.0;
  Field u;
};

struct StepControl {
  double cfl = 0.3;
  double slope_factor = 0.2;
  double m_stop = std::numeric_limits<double>::infinity();
  /// Stop once the inner self-similar length m^{-3/2} drops below g*dx.
  double resolution_guard = 8.0;
  double max_dt = 1e-2;
  std::size_t max_steps = 1000000;
  double t_end = std::numeric_limits<double>::infinity();
  /// Snapshots are taken when m first reaches m0 * ratio^k.
  double snapshot_ratio = 2.0;
};

void validate(const StepControl& ctl);

/// Raised when the discrete solution stops being finite before a physical
/// stopping criterion was met.
class SchemeBlowupError : public NumericError {
 public:
  SchemeBlowupError(const std::string& what, PhysState last)
      : NumericError(what), last_(std::move(last)) {}
  const PhysState& last_valid_state() const noexcept { return last_; }

 private:
  PhysState last_;
};

/// Right-hand side: -P(u u_x) + H[u] (full), -P(u u_x) (burgers_only) or
/// H[u] (linear_only), with P the 2/3-rule projection.
Field rhs(const Field& u, Mode mode);

/// min(cfl dx / |u|_inf, slope_factor / m, max_dt, t_end - t). The linear
/// mode has no transport and uses max_dt (clipped to t_end) only.
double choose_dt(const PhysState& state, const StepControl& ctl, Mode mode);
/// One classical RK4 step of the given size.
PhysState step_dt(const PhysState& state, double dt, Mode mode);
/// One RK4 step with dt from choose_dt.
PhysState step(const PhysState& state, const StepControl& ctl, Mode mode);

struct ShockLocation {
  double xi = 0.0;     // refined location of min u_x
  double kappa = 0.0;  // u(xi)
  double m = 0.0;      // -min u_x
  std::size_t grid_index = 0;
};

/// Grid argmin of u_x, parabolic refinement, then one Newton step on u_xx.
ShockLocation locate_shock(const Field& u);

struct Record {
  double t, m, xi, kappa, l2, linf, dt;
};

struct TimeSeries {
  std::vector<Record> records;
};

enum class StopReason { m_stop, resolution_guard, t_end, max_steps };
std::string to_string(StopReason r);

struct RunResult {
  TimeSeries series;
  std::vector<Snapshot> snapshots;
  StopReason stop = StopReason::max_steps;
  double l2_initial = 0.0;
  double l2_drift_max = 0.0;  // max relative deviation of ||u||_L2
};

/// Integrate from (t0, u0) until a stop criterion fires. The record for the
/// final state carries dt = 0.
RunResult run_to_blowup(const Field& u0, double t0, const StepControl& ctl, Mode mode);

struct TstarFit {
  double tstar = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
  bool low_confidence = false;  // r2 < 0.99
};

/// Least-squares fit of 1/m against t over the final decade of m (all
/// records with m >= m_last/10).
TstarFit extrapolate_tstar(const TimeSeries& series);

/// Records with m >= m_last/10.
std::vector<Record> final_decade(const TimeSeries& series);

}  // namespace bhblow
