#include "bhblow/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bhblow/fft.hpp"
#include "bhblow/kernels.hpp"

namespace bhblow {
namespace kn = kernels::omp;

Mode parse_mode(const std::string& name) {
  if (name == "full") return Mode::full;
  if (name == "burgers_only" || name == "burgers") return Mode::burgers_only;
  if (name == "linear_only" || name == "linear") return Mode::linear_only;
  throw ParameterError("unknown mode '" + name + "' (full, burgers_only, linear_only)");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::full: return "full";
    case Mode::burgers_only: return "burgers_only";
    case Mode::linear_only: return "linear_only";
  }
  return "?";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::m_stop: return "m_stop";
    case StopReason::resolution_guard: return "resolution_guard";
    case StopReason::t_end: return "t_end";
    case StopReason::max_steps: return "max_steps";
  }
  return "?";
}

void validate(const StepControl& c) {
  if (!(c.cfl > 0.0) || !(c.slope_factor > 0.0) || !(c.m_stop > 0.0) ||
      !(c.resolution_guard > 0.0) || !(c.max_dt > 0.0) || c.max_steps == 0)
    throw ParameterError("step control parameters must be positive");
  if (!(c.snapshot_ratio > 1.0)) throw ParameterError("snapshot ratio must exceed 1");
}

namespace {

// Buffers and multipliers for repeated right-hand-side evaluations on one
// grid. Field-free so the RK4 loop does not allocate.
class Solver {
 public:
  explicit Solver(const GridPtr& grid)
      : grid_(grid),
        fft_(fft::plan_for(grid->n())),
        n_(grid->n()),
        m_(grid->modes()),
        ik_(m_),
        hil_(m_, cplx(0.0, -1.0)),
        uh_(m_),
        wh_(m_),
        rh_(m_),
        ux_(n_),
        prod_(n_) {
    for (std::size_t j = 0; j < m_; ++j) ik_[j] = cplx(0.0, grid->wavenumber(j));
    ik_.back() = 0.0;
    hil_.front() = 0.0;
    hil_.back() = 0.0;
  }

  void rhs(std::span<const double> u, std::span<double> out, Mode mode) {
    fft_.forward(u, uh_);
    if (mode == Mode::linear_only) {
      kn::scale_modes(uh_, hil_, rh_);
      fft_.inverse(rh_, out);
      return;
    }
    kn::scale_modes(uh_, ik_, wh_);
    fft_.inverse(wh_, ux_);
    kn::multiply(u, ux_, prod_);
    fft_.forward(prod_, rh_);
    kn::truncate_modes(rh_, grid_->dealias_cutoff());
    if (mode == Mode::full) {
      kn::scale_modes(uh_, hil_, wh_);
      for (std::size_t j = 0; j < m_; ++j) rh_[j] = wh_[j] - rh_[j];
    } else {
      for (std::size_t j = 0; j < m_; ++j) rh_[j] = -rh_[j];
    }
    fft_.inverse(rh_, out);
  }

  void rk4(std::span<const double> u, double dt, Mode mode, std::span<double> out) {
    k1_.resize(n_);
    k2_.resize(n_);
    k3_.resize(n_);
    k4_.resize(n_);
    tmp_.resize(n_);
    rhs(u, k1_, mode);
    kn::axpy(u, 0.5 * dt, k1_, tmp_);
    rhs(tmp_, k2_, mode);
    kn::axpy(u, 0.5 * dt, k2_, tmp_);
    rhs(tmp_, k3_, mode);
    kn::axpy(u, dt, k3_, tmp_);
    rhs(tmp_, k4_, mode);
    kn::rk4_combine(u, k1_, k2_, k3_, k4_, dt, out);
  }

 private:
  GridPtr grid_;
  const fft::RealFft& fft_;
  std::size_t n_, m_;
  std::vector<cplx> ik_, hil_, uh_, wh_, rh_;
  std::vector<double> ux_, prod_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Field rhs(const Field& u, Mode mode) {
  if (!all_finite(u.samples())) throw NumericError("rhs: non-finite input");
  Solver s(u.grid_ptr());
  std::vector<double> out(u.size());
  s.rhs(u.samples(), out, mode);
  return Field(u.grid_ptr(), std::move(out));
}

namespace {

double dt_for(double dx, double linf, double m, const StepControl& ctl, Mode mode, double t) {
  double dt = ctl.max_dt;
  if (mode != Mode::linear_only) {
    if (linf > 0.0) dt = std::min(dt, ctl.cfl * dx / linf);
    if (m > 0.0) dt = std::min(dt, ctl.slope_factor / m);
  }
  if (std::isfinite(ctl.t_end)) dt = std::min(dt, ctl.t_end - t);
  return dt;
}

}  // namespace

double choose_dt(const PhysState& state, const StepControl& ctl, Mode mode) {
  const Field ux = derivative(state.u, 1);
  const double m = -*std::min_element(ux.samples().begin(), ux.samples().end());
  return dt_for(state.u.grid().dx(), norms(state.u).linf, m, ctl, mode, state.t);
}

PhysState step_dt(const PhysState& state, double dt, Mode mode) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
  Solver s(state.u.grid_ptr());
  std::vector<double> out(state.u.size());
  s.rk4(state.u.samples(), dt, mode, out);
  if (!all_finite(out)) throw SchemeBlowupError("RK4 step produced non-finite values", state);
  return {state.t + dt, Field(state.u.grid_ptr(), std::move(out))};
}

PhysState step(const PhysState& state, const StepControl& ctl, Mode mode) {
  return step_dt(state, choose_dt(state, ctl, mode), mode);
}

ShockLocation locate_shock(const Field& u) {
  const SpectralGrid& g = u.grid();
  const Field ux = derivative(u, 1);
  const std::size_t n = g.n();
  const std::size_t j = kn::argmin(ux.samples());
  const double fm = ux[(j + n - 1) % n], f0 = ux[j], fp = ux[(j + 1) % n];
  const double den = fm - 2.0 * f0 + fp;
  double shift = den > 0.0 ? 0.5 * (fm - fp) / den : 0.0;
  shift = std::clamp(shift, -0.5, 0.5);
  double xi = g.x(j) + shift * g.dx();
  // One Newton step on u_xx, kept only if it stays within a cell.
  const auto d = interp_derivatives(u, xi, 3);
  if (d[3] > 0.0) {
    const double dxn = -d[2] / d[3];
    if (std::abs(dxn) <= g.dx()) xi += dxn;
  }
  xi = g.wrap(xi);
  const auto e = interp_derivatives(u, xi, 1);
  ShockLocation s;
  s.xi = xi;
  s.kappa = e[0];
  s.m = std::max(-e[1], -f0);
  s.grid_index = j;
  return s;
}

RunResult run_to_blowup(const Field& u0, double t0, const StepControl& ctl, Mode mode) {
  validate(ctl);
  if (!all_finite(u0.samples())) throw NumericError("run_to_blowup: non-finite initial data");
  const GridPtr& grid = u0.grid_ptr();
  const double dx = grid->dx();
  Solver solver(grid);
  RunResult res;
  res.l2_initial = norms(u0).l2;

  PhysState state{t0, u0};
  std::vector<double> next(u0.size());
  double m0 = 0.0;
  double next_snap = 0.0;
  for (std::size_t steps = 0;; ++steps) {
    const ShockLocation loc = locate_shock(state.u);
    const Norms nr = norms(state.u);
    if (steps == 0) {
      m0 = loc.m;
      next_snap = m0 * ctl.snapshot_ratio;
      res.snapshots.push_back({state.t, state.u});
    }
    if (res.l2_initial > 0.0)
      res.l2_drift_max = std::max(res.l2_drift_max, std::abs(nr.l2 / res.l2_initial - 1.0));

    bool stop = true;
    if (mode != Mode::linear_only && loc.m > 0.0 && std::pow(loc.m, -1.5) < ctl.resolution_guard * dx)
      res.stop = StopReason::resolution_guard;
    else if (loc.m >= ctl.m_stop)
      res.stop = StopReason::m_stop;
    else if (state.t >= ctl.t_end)
      res.stop = StopReason::t_end;
    else if (steps >= ctl.max_steps)
      res.stop = StopReason::max_steps;
    else
      stop = false;

    const double dt = stop ? 0.0 : dt_for(dx, nr.linf, loc.m, ctl, mode, state.t);
    res.series.records.push_back({state.t, loc.m, loc.xi, loc.kappa, nr.l2, nr.linf, dt});
    if (!stop && mode != Mode::linear_only && m0 > 0.0 && loc.m >= next_snap && steps > 0) {
      res.snapshots.push_back({state.t, state.u});
      while (next_snap <= loc.m) next_snap *= ctl.snapshot_ratio;
    }
    if (stop) {
      if (steps > 0) res.snapshots.push_back({state.t, state.u});
      return res;
    }
    solver.rk4(state.u.samples(), dt, mode, next);
    if (!all_finite(next)) throw SchemeBlowupError("RK4 step produced non-finite values", state);
    state = PhysState{state.t + dt, Field(grid, next)};
  }
}

std::vector<Record> final_decade(const TimeSeries& series) {
  std::vector<Record> out;
  if (series.records.empty()) return out;
  const double m_last = series.records.back().m;
  for (const Record& r : series.records)
    if (r.m >= m_last / 10.0) out.push_back(r);
  return out;
}

TstarFit extrapolate_tstar(const TimeSeries& series) {
  const std::vector<Record> sel = final_decade(series);
  if (sel.size() < 20) throw ParameterError("T* fit needs at least 20 records in the final decade");
  const double nrec = static_cast<double>(sel.size());
  double tm = 0.0, ym = 0.0;
  for (const Record& r : sel) {
    tm += r.t;
    ym += 1.0 / r.m;
  }
  tm /= nrec;
  ym /= nrec;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const Record& r : sel) {
    const double dt = r.t - tm, dy = 1.0 / r.m - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (!(stt > 0.0)) throw NumericError("T* fit: degenerate time span");
  TstarFit f;
  f.count = sel.size();
  f.slope = sty / stt;
  f.intercept = ym - f.slope * tm;
  f.tstar = tm - ym / f.slope;
  f.r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  f.low_confidence = f.r2 < 0.99;
  return f;
}

}  // namespace bhblow
