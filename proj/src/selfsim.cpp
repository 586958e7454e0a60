#include "bhblow/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bhblow/hilbert.hpp"
#include "bhblow/profile.hpp"

namespace bhblow {

double local_time_derivative(std::span<const double> t, std::span<const double> f, std::size_t i,
                             std::size_t half, int degree) {
  const std::size_t n = t.size();
  if (n != f.size() || i >= n) throw ParameterError("local_time_derivative: bad index");
  if (n < 2) throw ParameterError("local_time_derivative: need at least two samples");
  const std::size_t width = std::min(n, 2 * half + 1);
  std::size_t lo = i >= half ? i - half : 0;
  if (lo + width > n) lo = n - width;
  const int deg = std::min<int>(degree, static_cast<int>(width) - 1);
  const int p = deg + 1;
  double scale = 0.0;
  for (std::size_t k = lo; k < lo + width; ++k) scale = std::max(scale, std::abs(t[k] - t[i]));
  if (!(scale > 0.0)) throw NumericError("local_time_derivative: repeated time stamps");
  // Normal equations of the polynomial least-squares fit in τ = (t - t_i)/scale.
  std::vector<double> A(static_cast<std::size_t>(p * p), 0.0), b(static_cast<std::size_t>(p), 0.0);
  for (std::size_t k = lo; k < lo + width; ++k) {
    const double tau = (t[k] - t[i]) / scale;
    std::vector<double> pw(static_cast<std::size_t>(2 * p), 1.0);
    for (int q = 1; q < 2 * p; ++q) pw[static_cast<std::size_t>(q)] = pw[static_cast<std::size_t>(q - 1)] * tau;
    for (int r = 0; r < p; ++r) {
      b[static_cast<std::size_t>(r)] += pw[static_cast<std::size_t>(r)] * f[k];
      for (int c = 0; c < p; ++c) A[static_cast<std::size_t>(r * p + c)] += pw[static_cast<std::size_t>(r + c)];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < p; ++c) {
    int piv = c;
    for (int r = c + 1; r < p; ++r)
      if (std::abs(A[static_cast<std::size_t>(r * p + c)]) > std::abs(A[static_cast<std::size_t>(piv * p + c)])) piv = r;
    if (piv != c) {
      for (int k = 0; k < p; ++k) std::swap(A[static_cast<std::size_t>(c * p + k)], A[static_cast<std::size_t>(piv * p + k)]);
      std::swap(b[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(piv)]);
    }
    const double d = A[static_cast<std::size_t>(c * p + c)];
    if (d == 0.0) throw NumericError("local_time_derivative: singular fit");
    for (int r = c + 1; r < p; ++r) {
      const double w = A[static_cast<std::size_t>(r * p + c)] / d;
      for (int k = c; k < p; ++k) A[static_cast<std::size_t>(r * p + k)] -= w * A[static_cast<std::size_t>(c * p + k)];
      b[static_cast<std::size_t>(r)] -= w * b[static_cast<std::size_t>(c)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(p));
  for (int r = p - 1; r >= 0; --r) {
    double v = b[static_cast<std::size_t>(r)];
    for (int k = r + 1; k < p; ++k) v -= A[static_cast<std::size_t>(r * p + k)] * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(r)] = v / A[static_cast<std::size_t>(r * p + r)];
  }
  return p > 1 ? x[1] / scale : 0.0;
}

TrackEntry make_track_entry(const Snapshot& snap, const TimeSeries* series) {
  const ShockLocation loc = locate_shock(snap.u);
  TrackEntry e;
  e.t = snap.t;
  e.xi = loc.xi;
  e.kappa = loc.kappa;
  e.m = loc.m;
  if (series != nullptr && !series->records.empty()) {
    const auto& rec = series->records;
    std::size_t idx = rec.size();
    for (std::size_t k = 0; k < rec.size(); ++k)
      if (rec[k].t == snap.t) {
        idx = k;
        break;
      }
    if (idx < rec.size() && rec.size() >= 3) {
      std::vector<double> ts(rec.size()), xs(rec.size()), taus(rec.size()), ks(rec.size());
      for (std::size_t k = 0; k < rec.size(); ++k) {
        ts[k] = rec[k].t;
        xs[k] = rec[k].xi;
        taus[k] = rec[k].t + 1.0 / rec[k].m;
        ks[k] = rec[k].kappa;
      }
      e.xi = rec[idx].xi;
      e.kappa = rec[idx].kappa;
      e.m = rec[idx].m;
      e.xi_dot = local_time_derivative(ts, xs, idx);
      e.tau_dot = local_time_derivative(ts, taus, idx);
      e.kappa_dot = local_time_derivative(ts, ks, idx);
    }
  }
  e.tau_minus_t = 1.0 / e.m;
  e.tau = e.t + e.tau_minus_t;
  e.s = std::log(e.m);
  const auto hd = interp_derivatives(hilbert_multiplier(snap.u), e.xi, 2);
  e.h_ux = hd[1];
  e.h_uxx = hd[2];
  e.uxxx = interp_derivatives(snap.u, e.xi, 3)[3];
  return e;
}

ModulationTrack build_track(const TimeSeries& series, const std::vector<Snapshot>& snapshots) {
  ModulationTrack tr;
  for (const Snapshot& s : snapshots) tr.entries.push_back(make_track_entry(s, &series));
  return tr;
}

SelfSimilarFrame extract_frame(const PhysState& state, const TrackEntry& entry, const FrameOptions& opt) {
  const SpectralGrid& g = state.u.grid();
  const double m = entry.m;
  if (!(m > 0.0)) throw ParameterError("extract_frame: slope must be positive");
  const double scale = std::pow(m, -1.5);  // e^{-3s/2}
  if (scale < opt.min_scale_cells * g.dx()) {
    std::ostringstream os;
    os << "frame at m = " << m << " under-resolved: m^{-3/2} = " << scale << " < "
       << opt.min_scale_cells << " dx; trustworthy |X| only beyond " << opt.min_scale_cells * g.dx() / scale;
    throw ResolutionError(os.str());
  }
  SelfSimilarFrame f(state.u);
  f.s = std::log(m);
  f.t = state.t;
  f.m = m;
  f.xi = entry.xi;
  f.kappa = entry.kappa;
  f.window = opt.window;
  const double m32 = std::pow(m, 1.5);
  f.x_cap = std::min(0.5 * m32, (g.half_width() - std::abs(entry.xi)) * m32);
  if (!(f.x_cap > opt.x_min)) throw ResolutionError("extract_frame: empty X window");

  const std::size_t ns = opt.per_side;
  std::vector<double> pos(ns);
  const double a = std::log(opt.x_min), b = std::log(f.x_cap);
  for (std::size_t i = 0; i < ns; ++i)
    pos[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(ns - 1));
  pos.back() = f.x_cap;
  for (std::size_t i = ns; i-- > 0;) f.X.push_back(-pos[i]);
  f.X.push_back(0.0);
  for (double p : pos) f.X.push_back(p);

  std::vector<double> xs(f.X.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = entry.xi + f.X[i] * scale;
  const auto d = interp_derivatives(state.u, xs, 5);
  for (int j = 0; j <= 5; ++j) {
    // ∂ʲ_X U = m^{1/2 - 3j/2} ∂ʲ_x u.
    const double c = std::pow(m, 0.5 - 1.5 * j);
    auto& col = f.D[static_cast<std::size_t>(j)];
    col.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double v = d[i * 6 + static_cast<std::size_t>(j)];
      if (j == 0) v -= entry.kappa;
      col[i] = c * v;
    }
  }
  const std::size_t i0 = ns;
  f.residual_U0 = f.D[0][i0];
  f.residual_dU0 = f.D[1][i0] + 1.0;
  f.residual_d2U0 = f.D[2][i0];
  f.nu_hat = f.D[3][i0];

  // Extraction error proxy: ν̂ recomputed without the top quarter of the
  // retained spectrum.
  {
    std::vector<cplx> spec(state.u.spectrum().begin(), state.u.spectrum().end());
    const std::size_t keep = (3 * g.dealias_cutoff()) / 4;
    for (std::size_t j = keep; j < spec.size(); ++j) spec[j] = 0.0;
    const Field low = Field::from_spectrum(state.u.grid_ptr(), std::move(spec));
    const double nu_low = std::pow(m, -4.0) * interp_derivatives(low, entry.xi, 3)[3];
    f.nu_error = std::abs(f.nu_hat - nu_low);
  }

  f.window_sup_dist = 0.0;
  if (f.nu_hat > 0.0) {
    for (std::size_t i = 0; i < f.X.size(); ++i)
      if (std::abs(f.X[i]) <= opt.window)
        f.window_sup_dist = std::max(f.window_sup_dist, std::abs(f.D[0][i] - profile::rescaled(f.nu_hat, f.X[i])));
  } else {
    f.window_sup_dist = std::numeric_limits<double>::infinity();
  }
  return f;
}

ModulationReport modulation_residuals(const ModulationTrack& track, bool source_on) {
  ModulationReport rep;
  rep.enough_snapshots = track.entries.size() >= 5;
  if (track.entries.empty()) return rep;
  const double s0 = track.entries.front().s;
  rep.late_xi_residual = std::numeric_limits<double>::quiet_NaN();
  for (const TrackEntry& e : track.entries) {
    ModulationRow r{};
    r.s = e.s;
    r.t = e.t;
    r.tau_dot = e.tau_dot;
    r.xi_dot = e.xi_dot;
    r.tau_dot_pred = source_on ? e.h_ux / (e.m * e.m) : 0.0;
    r.xi_dot_pred = source_on && e.uxxx != 0.0 ? e.kappa - e.h_uxx / e.uxxx : e.kappa;
    auto rel = [](double meas, double pred) {
      const double sc = std::max(std::abs(pred), std::abs(meas));
      return sc > 0.0 ? std::abs(meas - pred) / sc : 0.0;
    };
    r.tau_residual = rel(r.tau_dot, r.tau_dot_pred);
    r.xi_residual = rel(r.xi_dot, r.xi_dot_pred);
    r.taubound = std::exp(-0.75 * e.s);
    r.taubound_ok = std::abs(r.tau_dot) <= r.taubound;
    if (e.s - s0 >= 3.0) {
      ++rep.late_rows;
      if (std::isnan(rep.late_xi_residual) || r.xi_residual > rep.late_xi_residual)
        rep.late_xi_residual = r.xi_residual;
    }
    rep.rows.push_back(r);
  }
  return rep;
}

ConvergenceReport convergence_to_profile(const std::vector<SelfSimilarFrame>& frames, double epsilon) {
  ConvergenceReport rep;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    rep.s.push_back(frames[k].s);
    rep.nu_hat.push_back(frames[k].nu_hat);
    rep.nu_increment.push_back(k == 0 ? 0.0 : std::abs(frames[k].nu_hat - frames[k - 1].nu_hat));
    rep.window_sup_dist.push_back(frames[k].window_sup_dist);
  }
  if (frames.empty()) return rep;
  rep.precondition_met = frames.size() >= 4 && frames.back().s - frames.front().s >= 2.0;
  const std::size_t n = frames.size();
  if (n >= 3) {
    double sm = 0.0, dm = 0.0;
    for (std::size_t k = n - 3; k < n; ++k) sm += frames[k].s / 3.0, dm += frames[k].window_sup_dist / 3.0;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = n - 3; k < n; ++k) {
      sxx += (frames[k].s - sm) * (frames[k].s - sm);
      sxy += (frames[k].s - sm) * (frames[k].window_sup_dist - dm);
    }
    rep.dist_trend = sxy / sxx;
    auto steps_ok = [&](double slack) {
      return frames[n - 2].window_sup_dist <= (1.0 + slack) * frames[n - 3].window_sup_dist &&
             frames[n - 1].window_sup_dist <= (1.0 + slack) * frames[n - 2].window_sup_dist;
    };
    rep.dist_nonincreasing = steps_ok(kDistSlack);
    rep.dist_monotone = steps_ok(0.0);
  }
  rep.nu_final = frames.back().nu_hat;
  rep.nu_tolerance = std::pow(epsilon, 0.25);
  rep.nu_extraction_error = frames.back().nu_error;
  rep.nu_ok = std::abs(rep.nu_final - 6.0) <= rep.nu_tolerance;
  rep.final_dist = frames.back().window_sup_dist;
  return rep;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = ym - f.slope * xm;
  f.r2 = (sxx > 0.0 && syy > 0.0) ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

CuspFit cusp_exponent(const PhysState& state, double x_star, double w_lo, double w_hi,
                      std::size_t points_per_side) {
  const SpectralGrid& g = state.u.grid();
  const double m = locate_shock(state.u).m;
  CuspFit c;
  c.w_lo = std::max(w_lo, 5.0 * std::pow(m, -1.5));
  c.w_hi = std::min(w_hi, 0.1);
  if (!(c.w_lo < c.w_hi) || points_per_side < 2) {
    std::ostringstream os;
    os << "cusp fit window empty: [" << c.w_lo << ", " << c.w_hi << "]";
    throw ResolutionError(os.str());
  }
  std::vector<double> r(points_per_side), xs;
  const double a = std::log(c.w_lo), b = std::log(c.w_hi);
  for (std::size_t i = 0; i < points_per_side; ++i)
    r[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points_per_side - 1));
  for (double ri : r) xs.push_back(x_star - ri);
  for (double ri : r) xs.push_back(x_star + ri);
  const auto d = interp_derivatives(state.u, xs, 1);
  std::vector<double> lr(points_per_side), ll(points_per_side), lrr(points_per_side);
  std::vector<double> all_x, all_y;
  for (std::size_t i = 0; i < points_per_side; ++i) {
    lr[i] = std::log(r[i]);
    ll[i] = std::log(std::abs(d[2 * i + 1]));
    lrr[i] = std::log(std::abs(d[2 * (points_per_side + i) + 1]));
  }
  c.left = fit_line(lr, ll).slope;
  c.right = fit_line(lr, lrr).slope;
  c.exponent = 0.5 * (c.left + c.right);
  all_x = lr;
  all_x.insert(all_x.end(), lr.begin(), lr.end());
  all_y = ll;
  all_y.insert(all_y.end(), lrr.begin(), lrr.end());
  c.r2 = fit_line(all_x, all_y).r2;

  const Field ux = derivative(state.u, 1);
  c.far_max_slope = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    if (std::abs(g.wrap(g.x(j) - x_star)) > 0.5) {
      ++c.far_points;
      c.far_max_slope = std::max(c.far_max_slope, std::abs(ux[j]));
    }
  }
  if (c.far_points == 0) c.far_max_slope = std::numeric_limits<double>::quiet_NaN();
  c.far_ok = c.far_points == 0 || c.far_max_slope <= 2.0;
  return c;
}

double extrapolate_xstar(const TimeSeries& series, double tstar) {
  const std::vector<Record> sel = final_decade(series);
  if (sel.size() < 2) throw ParameterError("x* extrapolation needs at least two records");
  std::vector<double> t, x;
  for (const Record& r : sel) {
    t.push_back(r.t);
    x.push_back(r.xi);
  }
  const LineFit f = fit_line(t, x);
  return f.intercept + f.slope * tstar;
}

Trajectory integrate_trajectory(const SpeedField& V, double X0, double s0, double s1, double h,
                                double x_limit) {
  if (!(h > 0.0) || !(s1 >= s0)) throw ParameterError("integrate_trajectory: bad step or range");
  Trajectory tr;
  double X = X0, s = s0;
  tr.s.push_back(s);
  tr.X.push_back(X);
  while (s < s1) {
    const double hh = std::min(h, s1 - s);
    const double k1 = V(X, s);
    const double k2 = V(X + 0.5 * hh * k1, s + 0.5 * hh);
    const double k3 = V(X + 0.5 * hh * k2, s + 0.5 * hh);
    const double k4 = V(X + hh * k3, s + hh);
    const double Xn = X + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (std::abs(Xn) > x_limit || std::abs(X + hh * k3) > x_limit) {
      tr.truncated = true;
      break;
    }
    X = Xn;
    s += hh;
    tr.s.push_back(s);
    tr.X.push_back(X);
  }
  return tr;
}

FrameSpeed::FrameSpeed(const std::vector<SelfSimilarFrame>& frames, const ModulationTrack& track)
    : frames_(&frames) {
  if (frames.empty()) throw ParameterError("FrameSpeed needs at least one frame");
  for (std::size_t k = 1; k < frames.size(); ++k)
    if (!(frames[k].s > frames[k - 1].s)) throw ParameterError("FrameSpeed: frames must have increasing s");
  for (const SelfSimilarFrame& f : frames) {
    const TrackEntry* e = nullptr;
    for (const TrackEntry& te : track.entries)
      if (te.t == f.t) e = &te;
    if (e == nullptr) throw ParameterError("FrameSpeed: no track entry for a frame");
    shift_.push_back(std::exp(0.5 * f.s) * (e->kappa - e->xi_dot));
    denom_.push_back(1.0 - e->tau_dot);
  }
}

double FrameSpeed::s_min() const { return frames_->front().s; }
double FrameSpeed::s_max() const { return frames_->back().s; }

double FrameSpeed::x_limit() const {
  double lim = std::numeric_limits<double>::infinity();
  for (const SelfSimilarFrame& f : *frames_) lim = std::min(lim, f.x_cap);
  return lim;
}

double FrameSpeed::frame_value(std::size_t k, double X) const {
  const SelfSimilarFrame& f = (*frames_)[k];
  const auto& xs = f.X;
  const double Xc = std::clamp(X, xs.front(), xs.back());
  std::size_t hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), Xc) - xs.begin());
  hi = std::clamp<std::size_t>(hi, 1, xs.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = xs[hi] - xs[lo];
  const double t = (Xc - xs[lo]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  const double U = h00 * f.D[0][lo] + h10 * h * f.D[1][lo] + h01 * f.D[0][hi] + h11 * h * f.D[1][hi];
  return (U + shift_[k]) / denom_[k] + 1.5 * X;
}

double FrameSpeed::operator()(double X, double s) const {
  const auto& fr = *frames_;
  if (fr.size() == 1 || s <= fr.front().s) return frame_value(0, X);
  if (s >= fr.back().s) return frame_value(fr.size() - 1, X);
  std::size_t k = 1;
  while (fr[k].s < s) ++k;
  const double w = (s - fr[k - 1].s) / (fr[k].s - fr[k - 1].s);
  return (1.0 - w) * frame_value(k - 1, X) + w * frame_value(k, X);
}

std::vector<double> default_lagrangian_seeds(double M) {
  const double l = std::pow(std::log(M), -2.0);
  return {-10.0, -1.0, -2.0 * l, -l, 0.0, l, 2.0 * l, 1.0, 10.0};
}

LagrangianReport lagrangian_check(const SpeedField& V, double s0, double s1, double x_limit, double M,
                                  const std::vector<double>& seeds, double h) {
  LagrangianReport rep;
  const double l = std::pow(std::log(M), -2.0);
  for (double X0 : seeds) {
    LagrangianSeedResult r;
    r.X0 = X0;
    r.s0 = s0;
    r.lower_applies = std::abs(X0) >= l * (1.0 - 1e-12);
    const Trajectory tr = integrate_trajectory(V, X0, s0, s1, h, x_limit);
    r.truncated = tr.truncated;
    r.s_end = tr.s.back();
    r.lower_margin = std::numeric_limits<double>::infinity();
    r.upper_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tr.s.size(); ++i) {
      const double ds = tr.s[i] - s0;
      const double a = std::abs(tr.X[i]);
      if (r.lower_applies && X0 != 0.0) r.lower_margin = std::min(r.lower_margin, a / (std::abs(X0) * std::exp(ds / 5.0)) - 1.0);
      const double ub = (std::abs(X0) + 3.5 * M * std::exp(0.5 * s0)) * std::exp(1.5 * ds);
      r.upper_margin = std::min(r.upper_margin, 1.0 - a / ub);
    }
    if (!r.lower_applies || X0 == 0.0) r.lower_margin = 0.0;
    r.pass = r.lower_margin >= 0.0 && r.upper_margin >= 0.0;
    rep.all_pass = rep.all_pass && r.pass;
    rep.seeds.push_back(r);
  }
  return rep;
}

}  // namespace bhblow
