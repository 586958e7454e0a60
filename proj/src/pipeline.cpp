#include "bhblow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "bhblow/error.hpp"
#include "bhblow/hilbert.hpp"
#include "bhblow/initial_data.hpp"
#include "bhblow/snapshot.hpp"

namespace bhblow {
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no NaN or infinity.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json unavailable(const std::string& reason) { return {{"available", false}, {"reason", reason}}; }

void write_json(const fs::path& p, const json& j) {
  std::ofstream os(p, std::ios::trunc);
  if (!os) throw IoError("cannot write " + p.string());
  os << j.dump(2) << "\n";
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw IoError("cannot open " + p.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw IoError(p.string() + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::trunc);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%03zu.bhf", k);
  return buf;
}

std::optional<TstarFit> try_fit(const TimeSeries& series, std::string* reason) {
  try {
    return extrapolate_tstar(series);
  } catch (const Error& e) {
    if (reason) *reason = e.what();
    return std::nullopt;
  }
}

json fit_json(const TimeSeries& series) {
  std::string why;
  const auto fit = try_fit(series, &why);
  if (!fit) return unavailable(why);
  return {{"available", true},   {"tstar", fit->tstar}, {"slope", fit->slope},
          {"intercept", fit->intercept}, {"r2", fit->r2}, {"count", fit->count},
          {"low_confidence", fit->low_confidence}};
}

}  // namespace

Field small_amplitude_data(const GridPtr& grid, double eps) {
  const double shift = 2.0 * std::numbers::pi * std::numbers::pi;
  return Field::from_function(grid, [eps, shift](double x) {
    return eps * (2.0 * std::cos(x) + std::cos(2.0 * (x + shift)));
  });
}

Field make_initial(const RunConfig& c) {
  switch (c.initial) {
    case InitialKind::profile: return build_u0(c.data, make_grid(c.n, c.half_width));
    case InitialKind::small_amplitude: return small_amplitude_data(make_grid(c.n, c.half_width), c.data.epsilon);
    case InitialKind::file: {
      Snapshot s = read_snapshot(c.data_file);
      if (s.u.size() != c.n || s.u.grid().half_width() != c.half_width)
        throw ConfigError("data_file: grid does not match grid.n / grid.L_dom");
      return s.u;
    }
  }
  throw ConfigError("initial: unknown kind");
}

void write_evolution(const fs::path& dir, const RunData& run) {
  fs::create_directories(dir);
  save_config(run.config, dir / "config.json");
  const RunResult& r = run.result;
  {
    std::ofstream os = open_out(dir / "timeseries.csv");
    os << "t,m,xi,kappa,l2,linf,dt\n";
    for (const Record& q : r.series.records)
      os << num(q.t) << ',' << num(q.m) << ',' << num(q.xi) << ',' << num(q.kappa) << ',' << num(q.l2) << ','
         << num(q.linf) << ',' << num(q.dt) << '\n';
  }
  json snaps = json::array();
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    const std::string name = snapshot_name(k);
    write_snapshot(dir / name, r.snapshots[k].u, r.snapshots[k].t);
    snaps.push_back({{"file", name}, {"t", r.snapshots[k].t}, {"m", locate_shock(r.snapshots[k].u).m}});
  }
  const auto& recs = r.series.records;
  json j;
  j["mode"] = to_string(run.config.mode);
  j["stop_reason"] = to_string(r.stop);
  j["steps"] = recs.empty() ? 0 : recs.size() - 1;
  j["t_initial"] = recs.empty() ? json(nullptr) : json(recs.front().t);
  j["t_final"] = recs.empty() ? json(nullptr) : json(recs.back().t);
  j["m_initial"] = recs.empty() ? json(nullptr) : json(recs.front().m);
  j["m_final"] = recs.empty() ? json(nullptr) : json(recs.back().m);
  j["l2_initial"] = r.l2_initial;
  j["l2_drift_max"] = r.l2_drift_max;
  j["snapshots"] = snaps;
  j["fit"] = run.config.mode == Mode::linear_only ? unavailable("no blowup in the linear mode") : fit_json(r.series);
  j["wall_seconds"] = run.wall_seconds;
  write_json(dir / "evolve.json", j);
}

namespace {

StopReason parse_stop(const std::string& s) {
  for (StopReason r : {StopReason::m_stop, StopReason::resolution_guard, StopReason::t_end, StopReason::max_steps})
    if (to_string(r) == s) return r;
  throw IoError("evolve.json: unknown stop reason '" + s + "'");
}

}  // namespace

RunData load_run(const fs::path& dir) {
  RunData run;
  run.config = load_config(dir / "config.json");
  const json ev = read_json(dir / "evolve.json");
  try {
    run.result.stop = parse_stop(ev.at("stop_reason").get<std::string>());
    run.result.l2_initial = ev.at("l2_initial").get<double>();
    run.result.l2_drift_max = ev.at("l2_drift_max").get<double>();
    run.wall_seconds = ev.at("wall_seconds").get<double>();
    for (const json& s : ev.at("snapshots")) {
      Snapshot snap = read_snapshot(dir / s.at("file").get<std::string>());
      run.result.snapshots.push_back(std::move(snap));
    }
  } catch (const json::exception& e) {
    throw IoError("evolve.json: " + std::string(e.what()));
  }
  std::ifstream is(dir / "timeseries.csv");
  if (!is) throw IoError("cannot open " + (dir / "timeseries.csv").string());
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v[7];
    const char* p = line.c_str();
    for (int k = 0; k < 7; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      if (end == p) throw IoError("timeseries.csv: malformed line '" + line + "'");
      p = *end == ',' ? end + 1 : end;
    }
    run.result.series.records.push_back(Record{v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return run;
}

FrameSet compute_frames(const RunData& run, const FrameOptions& opt) {
  FrameSet out;
  out.track = build_track(run.result.series, run.result.snapshots);
  for (std::size_t k = 0; k < run.result.snapshots.size(); ++k) {
    const Snapshot& sn = run.result.snapshots[k];
    const TrackEntry& e = out.track.entries[k];
    if (!out.frames.empty() && !(std::log(e.m) > out.frames.back().s)) {
      out.skipped.push_back(snapshot_name(k) + ": s does not increase");
      continue;
    }
    try {
      out.frames.push_back(extract_frame(PhysState{sn.t, sn.u}, e, opt));
    } catch (const ResolutionError& err) {
      out.skipped.push_back(snapshot_name(k) + ": " + err.what());
    }
  }
  return out;
}

void stage_selfsim(const fs::path& dir, const RunData& run, const FrameSet& fset) {
  {
    std::ofstream os = open_out(dir / "frames.csv");
    os << "s,X,U,dU,d2U,d3U\n";
    for (const SelfSimilarFrame& f : fset.frames)
      for (std::size_t i = 0; i < f.X.size(); ++i)
        os << num(f.s) << ',' << num(f.X[i]) << ',' << num(f.D[0][i]) << ',' << num(f.D[1][i]) << ','
           << num(f.D[2][i]) << ',' << num(f.D[3][i]) << '\n';
  }
  const bool source_on = run.config.mode == Mode::full;
  const ModulationReport mod = modulation_residuals(fset.track, source_on);
  {
    std::ofstream os = open_out(dir / "modulation.csv");
    os << "t,s,m,xi,kappa,tau,tau_minus_t,tau_dot,tau_dot_pred,tau_residual,xi_dot,xi_dot_pred,xi_residual,"
          "taubound,taubound_ok\n";
    for (std::size_t k = 0; k < mod.rows.size(); ++k) {
      const ModulationRow& r = mod.rows[k];
      const TrackEntry& e = fset.track.entries[k];
      os << num(r.t) << ',' << num(r.s) << ',' << num(e.m) << ',' << num(e.xi) << ',' << num(e.kappa) << ','
         << num(e.tau) << ',' << num(e.tau_minus_t) << ',' << num(r.tau_dot) << ',' << num(r.tau_dot_pred) << ','
         << num(r.tau_residual) << ',' << num(r.xi_dot) << ',' << num(r.xi_dot_pred) << ','
         << num(r.xi_residual) << ',' << num(r.taubound) << ',' << (r.taubound_ok ? 1 : 0) << '\n';
    }
  }

  json conv;
  if (fset.frames.empty()) {
    conv = unavailable("no resolvable frame");
  } else {
    const ConvergenceReport c = convergence_to_profile(fset.frames, run.config.data.epsilon);
    json frames = json::array();
    for (const SelfSimilarFrame& f : fset.frames)
      frames.push_back({{"s", f.s},
                        {"t", f.t},
                        {"m", f.m},
                        {"xi", f.xi},
                        {"kappa", f.kappa},
                        {"nu_hat", f.nu_hat},
                        {"nu_error", f.nu_error},
                        {"x_cap", f.x_cap},
                        {"window_sup_dist", f.window_sup_dist},
                        {"U0", f.residual_U0},
                        {"dU0_plus_1", f.residual_dU0},
                        {"d2U0", f.residual_d2U0}});
    conv = {{"available", true},
            {"window", fset.frames.front().window},
            {"frames", frames},
            {"skipped", fset.skipped},
            {"precondition_met", c.precondition_met},
            {"dist_trend", c.dist_trend},
            {"dist_nonincreasing", c.dist_nonincreasing},
            {"dist_monotone", c.dist_monotone},
            {"nu_final", c.nu_final},
            {"nu_tolerance", c.nu_tolerance},
            {"nu_extraction_error", c.nu_extraction_error},
            {"nu_ok", c.nu_ok},
            {"final_dist", c.final_dist},
            {"modulation",
             {{"enough_snapshots", mod.enough_snapshots},
              {"late_rows", mod.late_rows},
              {"late_xi_residual", jnum(mod.late_xi_residual)}}}};
  }
  write_json(dir / "convergence.json", conv);

  json cusp;
  std::string why;
  const auto fit = run.config.mode == Mode::linear_only ? std::nullopt : try_fit(run.result.series, &why);
  if (run.config.mode == Mode::linear_only) why = "no blowup in the linear mode";
  if (!fit) {
    cusp = unavailable(why);
  } else if (run.result.snapshots.empty()) {
    cusp = unavailable("no snapshot");
  } else {
    const double xs = extrapolate_xstar(run.result.series, fit->tstar);
    const Snapshot& last = run.result.snapshots.back();
    try {
      // Keep the fit inside the uncut plateau of profile data.
      const double w_hi = run.config.initial == InitialKind::profile ? std::min(0.1, 0.5 * run.config.data.cutoff_inner)
                                                                     : 0.1;
      const CuspFit c = cusp_exponent(PhysState{last.t, last.u}, xs, 0.0, w_hi);
      cusp = {{"available", true},     {"x_star", xs},         {"t", last.t},
              {"exponent", c.exponent}, {"left", c.left},       {"right", c.right},
              {"r2", c.r2},             {"w_lo", c.w_lo},       {"w_hi", c.w_hi},
              {"far_max_slope", jnum(c.far_max_slope)},          {"far_ok", c.far_ok},
              {"far_points", c.far_points}};
    } catch (const ResolutionError& e) {
      cusp = unavailable(e.what());
      cusp["x_star"] = xs;
    }
  }
  write_json(dir / "cusp.json", cusp);
}

std::string bootstrap_table(const BootstrapReport& rep) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %-10s %-9s %12s %12s %10s %8s\n", "id", "region", "status", "margin",
                "X", "s", "points");
  os << buf;
  for (const BootstrapItem& it : rep.items) {
    std::snprintf(buf, sizeof buf, "%-22s %-10s %-9s %12.4e %12.4e %10.4f %8zu", it.id.c_str(), it.region.c_str(),
                  to_string(it.status).c_str(), it.worst_margin, it.worst_X, it.worst_s, it.points);
    os << buf;
    if (!it.reason.empty()) os << "  (" << it.reason << ")";
    os << '\n';
  }
  os << rep.passed() << " pass, " << rep.failed() << " fail, " << rep.unchecked() << " unchecked\n";
  return os.str();
}

void stage_bootstrap(const fs::path& dir, const RunData& run, const FrameSet& fset, const BootstrapConfig& cfg) {
  json j;
  if (run.config.initial == InitialKind::small_amplitude) {
    j = unavailable("bootstrap ledger applies to scaled-profile data only");
  } else if (run.config.mode != Mode::full) {
    j = unavailable("bootstrap ledger applies to the full equation only");
  } else if (fset.frames.empty()) {
    j = unavailable("no resolvable frame");
  } else {
    const auto fit = try_fit(run.result.series, nullptr);
    const BootstrapReport rep =
        check_bootstrap(fset.frames, fset.track, cfg, fit ? std::optional<double>(fit->tstar) : std::nullopt);
    json items = json::array();
    for (const BootstrapItem& it : rep.items)
      items.push_back({{"id", it.id},
                       {"region", it.region},
                       {"description", it.description},
                       {"status", to_string(it.status)},
                       {"worst_margin", jnum(it.worst_margin)},
                       {"worst_X", jnum(it.worst_X)},
                       {"worst_s", jnum(it.worst_s)},
                       {"points", it.points},
                       {"reason", it.reason}});
    j = {{"available", true},
         {"M", cfg.M},
         {"epsilon", cfg.epsilon},
         {"l", cfg.l()},
         {"frames", fset.frames.size()},
         {"passed", rep.passed()},
         {"failed", rep.failed()},
         {"unchecked", rep.unchecked()},
         {"items", items}};
  }
  write_json(dir / "bootstrap.json", j);
}

void stage_lagrangian(const fs::path& dir, const RunData& run, const FrameSet& fset) {
  json j;
  if (fset.frames.size() < 2) {
    j = unavailable("need at least two frames");
  } else if (run.config.mode == Mode::linear_only) {
    j = unavailable("no blowup in the linear mode");
  } else {
    const FrameSpeed V(fset.frames, fset.track);
    const double M = run.config.bootstrap.M;
    const LagrangianReport rep = lagrangian_check(std::cref(V), V.s_min(), V.s_max(), V.x_limit(), M,
                                                  default_lagrangian_seeds(M));
    json seeds = json::array();
    for (const LagrangianSeedResult& r : rep.seeds)
      seeds.push_back({{"X0", r.X0},
                       {"s0", r.s0},
                       {"s_end", r.s_end},
                       {"lower_applies", r.lower_applies},
                       {"lower_margin", jnum(r.lower_margin)},
                       {"upper_margin", jnum(r.upper_margin)},
                       {"truncated", r.truncated},
                       {"pass", r.pass}});
    j = {{"available", true}, {"s0", V.s_min()}, {"s1", V.s_max()}, {"x_limit", V.x_limit()},
         {"M", M},            {"all_pass", rep.all_pass}, {"seeds", seeds}};
  }
  write_json(dir / "lagrangian.json", j);
}

void stage_interpolation(const fs::path& dir, const RunData& run) {
  json snaps = json::array();
  bool all = !run.result.snapshots.empty();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < run.result.snapshots.size(); ++k) {
    const InterpolationReport rep = check_interpolation(run.result.snapshots[k].u);
    json items = json::array();
    for (const InterpolationItem& it : rep.items) {
      items.push_back({{"id", it.id}, {"j", it.j}, {"lhs", it.lhs}, {"rhs", it.rhs}, {"margin", it.margin}});
      worst = std::min(worst, it.margin);
    }
    all = all && rep.all_hold(0.0);
    snaps.push_back({{"file", snapshot_name(k)}, {"t", run.result.snapshots[k].t}, {"items", items}});
  }
  json j = run.result.snapshots.empty()
               ? unavailable("no snapshot")
               : json{{"available", true}, {"all_positive", all}, {"worst_margin", jnum(worst)}, {"snapshots", snaps}};
  write_json(dir / "interpolation.json", j);
}

void stage_rate(const fs::path& dir, const RunData& run) {
  json j;
  std::string why;
  const auto fit = run.config.mode == Mode::linear_only ? std::nullopt : try_fit(run.result.series, &why);
  if (run.config.mode == Mode::linear_only) {
    j = unavailable("no blowup in the linear mode");
  } else if (!fit) {
    j = unavailable(why);
  } else {
    const RateReport r = check_blowup_rate_bound(run.result.series, fit->tstar, run.result.snapshots);
    j = {{"available", true},        {"tstar", fit->tstar},        {"product_min", r.product_min},
         {"product_max", r.product_max}, {"product_ok", r.product_ok}, {"h5_slope", jnum(r.h5_slope)},
         {"h5_points", r.h5_points},   {"h5_ok", r.h5_ok}};
  }
  write_json(dir / "rate.json", j);
}

void stage_oracle(const fs::path& dir, const RunData& run) {
  const auto& recs = run.result.series.records;
  if (run.result.snapshots.size() < 2 || recs.empty()) return;
  json j;
  if (run.config.mode == Mode::linear_only) {
    const Snapshot& first = run.result.snapshots.front();
    const Snapshot& last = run.result.snapshots.back();
    const double dt = last.t - first.t;
    const Field exact = std::cos(dt) * first.u + std::sin(dt) * hilbert_multiplier(first.u);
    const Norms d = norms(last.u - exact);
    j = {{"kind", "linear"}, {"elapsed", dt}, {"max_abs_deviation", d.linf}, {"l2_deviation", d.l2}};
  } else if (run.config.mode == Mode::burgers_only) {
    const double m0 = recs.front().m;
    const double expected = recs.front().t + 1.0 / m0;
    j = {{"kind", "burgers"}, {"m0", m0}, {"tstar_expected", expected}};
    std::string why;
    if (const auto fit = try_fit(run.result.series, &why)) {
      j["tstar"] = fit->tstar;
      j["offset_ratio"] = (fit->tstar - recs.front().t) * m0;  // 1 for exact characteristics
      j["slope"] = fit->slope;
    } else {
      j["tstar"] = nullptr;
      j["reason"] = why;
    }
  } else {
    return;
  }
  write_json(dir / "oracle.json", j);
}

json write_report(const fs::path& dir) {
  json rep;
  json reasons = json::object();
  auto load = [&](const char* file) -> std::optional<json> {
    if (!fs::exists(dir / file)) return std::nullopt;
    return read_json(dir / file);
  };
  // Copies key `src` of an artifact into the report, or records why not.
  auto take = [&](const std::optional<json>& art, const char* file, const char* key, const char* src) {
    if (!art) {
      rep[key] = nullptr;
      reasons[key] = std::string(file) + " not produced";
    } else if (art->contains("available") && !(*art)["available"].get<bool>()) {
      rep[key] = nullptr;
      reasons[key] = (*art)["reason"];
    } else if (!art->contains(src) || (*art)[src].is_null()) {
      rep[key] = nullptr;
      reasons[key] = std::string(src) + " missing from " + file;
    } else {
      rep[key] = (*art)[src];
    }
  };

  const auto ev = load("evolve.json");
  if (ev) {
    rep["stop_reason"] = (*ev)["stop_reason"];
    rep["wall_seconds"] = (*ev)["wall_seconds"];
    rep["l2_drift_max"] = (*ev)["l2_drift_max"];
    rep["m_final"] = (*ev)["m_final"];
    const std::optional<json> fit = (*ev)["fit"];
    take(fit, "evolve.json", "tstar", "tstar");
    take(fit, "evolve.json", "slope", "slope");
    take(fit, "evolve.json", "r2", "r2");
  } else {
    for (const char* k : {"stop_reason", "wall_seconds", "l2_drift_max", "m_final", "tstar", "slope", "r2"}) {
      rep[k] = nullptr;
      reasons[k] = "evolve.json not produced";
    }
  }
  const auto cusp = load("cusp.json");
  if (cusp && cusp->contains("x_star")) {
    rep["x_star"] = (*cusp)["x_star"];
  } else {
    take(cusp, "cusp.json", "x_star", "x_star");
  }
  take(cusp, "cusp.json", "cusp_exponent", "exponent");
  const auto conv = load("convergence.json");
  take(conv, "convergence.json", "nu_hat", "nu_final");
  take(conv, "convergence.json", "window_sup_dist", "final_dist");
  const auto boot = load("bootstrap.json");
  if (boot && (*boot)["available"].get<bool>()) {
    rep["bootstrap"] = {{"passed", (*boot)["passed"]}, {"failed", (*boot)["failed"]}, {"unchecked", (*boot)["unchecked"]}};
  } else {
    take(boot, "bootstrap.json", "bootstrap", "passed");
  }
  take(load("lagrangian.json"), "lagrangian.json", "lagrangian_all_pass", "all_pass");
  take(load("interpolation.json"), "interpolation.json", "interpolation_all_positive", "all_positive");
  const auto rate = load("rate.json");
  take(rate, "rate.json", "rate_product_min", "product_min");
  take(rate, "rate.json", "rate_product_max", "product_max");
  if (const auto orc = load("oracle.json")) rep["oracle"] = *orc;
  rep["null_reasons"] = reasons;

  std::vector<std::string> files;
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().filename() != "report.json") files.push_back(e.path().filename().string());
  files.push_back("report.json");
  std::sort(files.begin(), files.end());
  rep["artifacts"] = files;
  write_json(dir / "report.json", rep);
  return rep;
}

int run_experiment(const RunConfig& config) {
  validate(config);
  const fs::path dir = config.output;
  const auto start = std::chrono::steady_clock::now();
  RunData run;
  run.config = config;
  const Field u0 = make_initial(config);
  run.result = run_to_blowup(u0, config.t0, config.step, config.mode);
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_evolution(dir, run);

  const FrameSet fset = compute_frames(run, config.frames);
  stage_selfsim(dir, run, fset);
  stage_bootstrap(dir, run, fset, config.bootstrap);
  stage_lagrangian(dir, run, fset);
  stage_interpolation(dir, run);
  stage_rate(dir, run);
  stage_oracle(dir, run);
  write_report(dir);
  const bool needs_frames = config.mode != Mode::linear_only;
  return needs_frames && fset.frames.empty() ? 3 : 0;
}

namespace {

std::size_t pow2_at_least(double v) {
  std::size_t n = 256;
  while (static_cast<double>(n) < v) n *= 2;
  return n;
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "eps_%.3g", eps);
  return buf;
}

SweepRow run_member(const RunConfig& c) {
  SweepRow row;
  row.epsilon = c.data.epsilon;
  row.n = c.n;
  row.half_width = c.half_width;
  try {
    row.status = run_experiment(c);
    const json rep = read_json(fs::path(c.output) / "report.json");
    auto opt = [&](const char* k) { return rep[k].is_null() ? std::nullopt : std::optional<double>(rep[k].get<double>()); };
    row.tstar = opt("tstar");
    row.nu_hat = opt("nu_hat");
    row.cusp = opt("cusp_exponent");
    if (rep["bootstrap"].is_object()) row.bootstrap_failed = rep["bootstrap"]["failed"].get<std::size_t>();
  } catch (const Error& e) {
    row.status = e.exit_code();
    row.error = e.what();
  } catch (const std::exception& e) {
    row.status = 4;
    row.error = e.what();
  }
  return row;
}

}  // namespace

RunConfig sweep_member(const RunConfig& tmpl, double eps) {
  if (!(eps > 0.0)) throw ParameterError("sweep: epsilon must be positive");
  RunConfig c = tmpl;
  c.data.epsilon = eps;
  c.bootstrap.epsilon = eps;
  c.output = (fs::path(tmpl.output) / eps_tag(eps)).string();
  c.name = tmpl.name + "/" + eps_tag(eps);
  if (tmpl.initial == InitialKind::profile) {
    c.t0 = -eps;
    const double need = 10.0 * std::pow(eps, 1.5);
    const double widen = std::max(1.0, need / tmpl.data.cutoff_inner);
    c.data.cutoff_inner = tmpl.data.cutoff_inner * widen;
    c.data.cutoff_outer = tmpl.data.cutoff_outer * widen;
    c.half_width = std::max(tmpl.half_width, 4.0 * c.data.cutoff_outer);
    const double dx = 2.0 * tmpl.half_width / static_cast<double>(tmpl.n) * std::pow(eps / tmpl.data.epsilon, 1.5);
    c.n = pow2_at_least(2.0 * c.half_width / dx * (1.0 - 1e-12));
  }
  validate(c);
  return c;
}

SweepResult sweep(const RunConfig& tmpl, const std::vector<double>& eps, unsigned jobs) {
  if (eps.empty()) throw ParameterError("sweep: epsilon list is empty");
  std::vector<RunConfig> members;
  for (double e : eps) members.push_back(sweep_member(tmpl, e));
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  SweepResult res;
  res.rows.resize(members.size());
  std::deque<std::pair<std::size_t, std::future<SweepRow>>> running;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (running.size() >= jobs) {
      res.rows[running.front().first] = running.front().second.get();
      running.pop_front();
    }
    running.emplace_back(k, std::async(std::launch::async, run_member, members[k]));
  }
  for (auto& [k, f] : running) res.rows[k] = f.get();

  std::vector<double> lx, ly;
  for (const SweepRow& r : res.rows)
    if (r.tstar && *r.tstar != 0.0) {
      lx.push_back(std::log(r.epsilon));
      ly.push_back(std::log(std::abs(*r.tstar)));
    }
  if (lx.size() >= 2) {
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) xm += lx[i], ym += ly[i];
    xm /= static_cast<double>(lx.size());
    ym /= static_cast<double>(lx.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) sxx += (lx[i] - xm) * (lx[i] - xm), sxy += (lx[i] - xm) * (ly[i] - ym);
    if (sxx > 0.0) res.tstar_slope = sxy / sxx;
  }

  const fs::path dir = tmpl.output;
  fs::create_directories(dir);
  {
    std::ofstream os = open_out(dir / "sweep.csv");
    os << "epsilon,n,L_dom,status,tstar,nu_hat,cusp_exponent,bootstrap_failed\n";
    auto o = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    for (const SweepRow& r : res.rows)
      os << num(r.epsilon) << ',' << r.n << ',' << num(r.half_width) << ',' << r.status << ',' << o(r.tstar) << ','
         << o(r.nu_hat) << ',' << o(r.cusp) << ','
         << (r.bootstrap_failed ? std::to_string(*r.bootstrap_failed) : std::string()) << '\n';
  }
  json rows = json::array();
  for (const SweepRow& r : res.rows) {
    json jr = {{"epsilon", r.epsilon}, {"n", r.n}, {"L_dom", r.half_width}, {"status", r.status},
               {"dir", eps_tag(r.epsilon)}};
    if (!r.error.empty()) jr["error"] = r.error;
    rows.push_back(jr);
  }
  json summary = {{"rows", rows}, {"csv", "sweep.csv"}};
  summary["tstar_loglog_slope"] = res.tstar_slope ? json(*res.tstar_slope) : json(nullptr);
  if (!res.tstar_slope) summary["tstar_loglog_slope_reason"] = "fewer than two runs with a fitted T*";
  write_json(dir / "sweep.json", summary);
  return res;
}

}  // namespace bhblow
