#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bhblow/evolve.hpp"
#include "bhblow/grid.hpp"
#include "bhblow/snapshot.hpp"

namespace bhblow {

/// Modulation variables at one snapshot. The frame is fixed by
/// τ̂ - t = 1/m, ξ̂ = argmin u_x and κ̂ = u(ξ̂).
struct TrackEntry {
  double t = 0.0;
  double xi = 0.0;
  double kappa = 0.0;
  double m = 0.0;
  double tau_minus_t = 0.0;  // 1/m
  double tau = 0.0;          // t + 1/m
  double s = 0.0;            // log m
  double xi_dot = 0.0;       // measured dξ̂/dt
  double tau_dot = 0.0;      // measured dτ̂/dt
  double kappa_dot = 0.0;
  double h_ux = 0.0;         // H[u_x](ξ̂)
  double h_uxx = 0.0;        // H[u_xx](ξ̂)
  double uxxx = 0.0;         // u_xxx(ξ̂)
};

struct ModulationTrack {
  std::vector<TrackEntry> entries;
};

/// Derivative at records[i] of a sampled time series, from a least-squares
/// polynomial of the given degree through up to 2*half+1 neighbours
/// (one-sided near the ends).
double local_time_derivative(std::span<const double> t, std::span<const double> f, std::size_t i,
                             std::size_t half = 4, int degree = 4);

/// One entry per snapshot; time derivatives come from the dense series.
ModulationTrack build_track(const TimeSeries& series, const std::vector<Snapshot>& snapshots);
TrackEntry make_track_entry(const Snapshot& snap, const TimeSeries* series);

struct SelfSimilarFrame {
  explicit SelfSimilarFrame(Field state) : u(std::move(state)) {}

  double s = 0.0;
  double t = 0.0;
  double m = 0.0;
  double xi = 0.0;
  double kappa = 0.0;
  double nu_hat = 0.0;
  double nu_error = 0.0;       // change of ν̂ when the top quarter of modes is dropped
  double x_cap = 0.0;          // largest |X| sampled
  std::vector<double> X;       // sorted ascending, contains 0
  std::array<std::vector<double>, 6> D;  // ∂ʲ_X U at X, j = 0..5
  double window = 10.0;
  double window_sup_dist = 0.0;  // sup_{|X|<=window} |U - Ū_ν̂|
  double residual_U0 = 0.0;      // U(0)
  double residual_dU0 = 0.0;     // ∂_X U(0) + 1
  double residual_d2U0 = 0.0;    // ∂²_X U(0)
  Field u;                       // physical state the frame came from

  const std::vector<double>& U() const { return D[0]; }
};

struct FrameOptions {
  std::size_t per_side = 256;
  double x_min = 1e-3;
  double window = 10.0;
  /// Frames need m^{-3/2} >= min_scale_cells * dx.
  double min_scale_cells = 4.0;
};

/// U(X, s) = e^{s/2} (u(ξ̂ + e^{-3s/2} X, t) - κ̂) with e^s = m. Throws
/// ResolutionError when the inner scale is under-resolved.
SelfSimilarFrame extract_frame(const PhysState& state, const TrackEntry& entry,
                               const FrameOptions& opt = {});

struct ModulationRow {
  double s, t;
  double tau_dot, tau_dot_pred, tau_residual;
  double xi_dot, xi_dot_pred, xi_residual;
  double taubound;  // e^{-3s/4}
  bool taubound_ok;
};

struct ModulationReport {
  std::vector<ModulationRow> rows;
  bool enough_snapshots = false;  // at least 5
  /// Largest relative ξ̇ residual among rows with s - s0 >= 3 (NaN if none).
  double late_xi_residual = 0.0;
  std::size_t late_rows = 0;
};

/// Predicted τ̇ = H[u_x](ξ̂)/m² and ξ̇ = κ̂ - H[u_xx](ξ̂)/u_xxx(ξ̂) against the
/// measured derivatives. Without the source term both predictions reduce to
/// τ̇ = 0, ξ̇ = κ̂.
ModulationReport modulation_residuals(const ModulationTrack& track, bool source_on = true);

/// Relative growth of window_sup_dist tolerated between consecutive frames.
inline constexpr double kDistSlack = 0.1;

struct ConvergenceReport {
  std::vector<double> s, nu_hat, nu_increment, window_sup_dist;
  bool precondition_met = false;  // >= 4 frames spanning >= 2 units of s
  /// Least-squares slope of window_sup_dist against s over the last 3 frames.
  double dist_trend = 0.0;
  /// Each of the last 3 frames within kDistSlack of its predecessor.
  bool dist_nonincreasing = false;
  /// Same with no slack.
  bool dist_monotone = false;
  double nu_final = 0.0;
  double nu_tolerance = 0.0;      // eps^{1/4}
  double nu_extraction_error = 0.0;
  bool nu_ok = false;
  double final_dist = 0.0;
};

ConvergenceReport convergence_to_profile(const std::vector<SelfSimilarFrame>& frames, double epsilon);

struct CuspFit {
  double exponent = 0.0;  // mean of the two one-sided slopes
  double left = 0.0, right = 0.0;
  double r2 = 0.0;        // pooled fit
  double w_lo = 0.0, w_hi = 0.0;
  double far_max_slope = 0.0;  // max |u_x| over |x - x*| > 1/2 (NaN if none)
  bool far_ok = true;
  std::size_t far_points = 0;
};

/// Log-log slope of |u_x| against |x - x*| on both sides of x*, over
/// [max(w_lo, 5 m^{-3/2}), w_hi].
CuspFit cusp_exponent(const PhysState& state, double x_star, double w_lo = 0.0, double w_hi = 0.1,
                      std::size_t points_per_side = 64);

/// x̂*: ξ̂ extrapolated linearly in t to T* over the final decade.
double extrapolate_xstar(const TimeSeries& series, double tstar);

// Lagrangian trajectories.

using SpeedField = std::function<double(double X, double s)>;

struct Trajectory {
  std::vector<double> s, X;
  bool truncated = false;  // left the valid X window
};

/// Classical RK4 for dΦ/ds = V(Φ, s). Stops early (truncated) if |Φ| would
/// exceed x_limit.
Trajectory integrate_trajectory(const SpeedField& V, double X0, double s0, double s1, double h,
                                double x_limit);

/// V(X, s) = (U + e^{s/2}(κ - ξ̇)) / (1 - τ̇) + 3X/2 assembled from frames:
/// cubic Hermite in X, linear in s.
class FrameSpeed {
 public:
  FrameSpeed(const std::vector<SelfSimilarFrame>& frames, const ModulationTrack& track);
  double operator()(double X, double s) const;
  double s_min() const;
  double s_max() const;
  /// Largest |X| sampled by every frame.
  double x_limit() const;

 private:
  const std::vector<SelfSimilarFrame>* frames_;
  std::vector<double> shift_;  // e^{s/2}(κ - ξ̇)
  std::vector<double> denom_;  // 1 - τ̇
  double frame_value(std::size_t k, double X) const;
};

struct LagrangianSeedResult {
  double X0 = 0.0;
  double s0 = 0.0, s_end = 0.0;
  double lower_margin = 0.0;  // min over s of |Φ|/(|X0| e^{(s-s0)/5}) - 1
  double upper_margin = 0.0;  // min over s of 1 - |Φ|/((|X0| + 3.5 M e^{s0/2}) e^{3(s-s0)/2})
  bool lower_applies = true;  // |X0| >= l
  bool pass = true;
  bool truncated = false;
};

struct LagrangianReport {
  std::vector<LagrangianSeedResult> seeds;
  bool all_pass = true;
};

LagrangianReport lagrangian_check(const SpeedField& V, double s0, double s1, double x_limit, double M,
                                  const std::vector<double>& seeds, double h = 0.01);
/// Default seeds ±{l, 2l, 1, 10} and 0 with l = (log M)^{-2}.
std::vector<double> default_lagrangian_seeds(double M);

}  // namespace bhblow
