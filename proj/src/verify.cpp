#include "bhblow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bhblow/kernels.hpp"
#include "bhblow/profile.hpp"

namespace bhblow {

double BootstrapConfig::l() const { return std::pow(std::log(M), -2.0); }
double BootstrapConfig::L_of_s(double s) const { return 0.5 * std::exp(1.5 * s); }

void validate(const BootstrapConfig& c) {
  if (!(c.M > 1.0)) throw ParameterError("bootstrap: M must exceed 1");
  if (!(c.epsilon > 0.0 && c.epsilon <= 0.1)) throw ParameterError("bootstrap: epsilon must be in (0, 0.1]");
  if (!(c.l() < 0.2)) throw ParameterError("bootstrap: l = (log M)^-2 must be below 1/5");
  if (!(c.high_derivative_gate > 0.0)) throw ParameterError("bootstrap: gate must be positive");
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::unchecked: return "unchecked";
  }
  return "?";
}

std::size_t BootstrapReport::passed() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(),
                                                 [](const BootstrapItem& i) { return i.status == CheckStatus::pass; }));
}
std::size_t BootstrapReport::failed() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(),
                                                 [](const BootstrapItem& i) { return i.status == CheckStatus::fail; }));
}
std::size_t BootstrapReport::unchecked() const {
  return static_cast<std::size_t>(std::count_if(
      items.begin(), items.end(), [](const BootstrapItem& i) { return i.status == CheckStatus::unchecked; }));
}
const BootstrapItem* BootstrapReport::find(const std::string& id) const {
  for (const BootstrapItem& i : items)
    if (i.id == id) return &i;
  return nullptr;
}

namespace {

struct Spec {
  const char* id;
  const char* region;
  const char* description;
};

const Spec kSpecs[] = {
    {"near.U_tilde", "near", "|U~| <= (eps^(1/8) + log M eps^(1/10)) l^4 for |X| <= l"},
    {"near.dU_tilde", "near", "|d U~| <= (eps^(1/8) + log M eps^(1/10)) l^3 for |X| <= l"},
    {"near.d2U_tilde", "near", "|d2 U~| <= (eps^(1/8) + log M eps^(1/10)) l^2 for |X| <= l"},
    {"near.d3U_tilde", "near", "|d3 U~| <= (eps^(1/8) + log M eps^(1/10)) l for |X| <= l"},
    {"near.d4U_tilde", "near", "|d4 U~| <= eps^(1/10) for |X| <= l"},
    {"at0.d3U_tilde", "at-0", "|d3 U~(0)| <= eps^(1/4)"},
    {"at0.d3U", "at-0", "5 < d3 U(0) < 7"},
    {"middle.U_tilde", "middle", "|U~| <= eps^(1/11) (1+X^2)^(1/6) for l <= |X| <= L(s)"},
    {"middle.dU_tilde", "middle", "|d U~| <= eps^(1/12) (1+X^2)^(-1/3) for l <= |X| <= L(s)"},
    {"middle.d2U", "middle", "|d2 U| <= M^(1/4) (1+X^2)^(-1/3) for l <= |X| <= L(s)"},
    {"middle.d3U", "middle", "|d3 U| <= M^(3/4)/2 for l <= |X| <= L(s)"},
    {"middle.U", "middle", "|U| <= (1 + eps^(1/11)) (1+X^2)^(1/6) for l <= |X| <= L(s)"},
    {"middle.dU", "middle", "|d U| <= (1+X^2)^(-1/3) for l <= |X| <= L(s)"},
    {"far.dU", "far", "|d U| <= 2 e^(-s) for |X| >= L(s)"},
    {"far.d2U", "far", "|d2 U| <= 4 M^(1/4) e^(-s) for |X| >= L(s)"},
    {"far.d3U", "far", "|d3 U| <= M^(3/4) for |X| >= L(s)"},
    {"global.dU_L2", "global", "||d U||_L2 <= 10"},
    {"global.d5U_L2", "global", "||d5 U||_L2 <= M^4"},
    {"global.U_shift_Linf", "global", "||U + e^(s/2) kappa||_inf <= M e^(s/2)"},
    {"global.dU_Linf", "global", "||d U||_inf = 1 = -d U(0), attained only at X = 0"},
    {"modulation.tau", "modulation", "|tau'| <= e^(-3s/4), |tau| <= 2 eps^(7/4), |T*| <= 2 eps^(7/4)"},
    {"modulation.xi", "modulation", "|xi'| <= 2M, |xi| <= 3 M eps"},
};

struct Acc {
  BootstrapItem item;
  std::string skip_reason;
  void upper(double X, double s, double measured, double bound) {
    record(X, s, (bound - std::abs(measured)) / bound);
  }
  void record(double X, double s, double margin) {
    if (item.points == 0 || margin < item.worst_margin) {
      item.worst_margin = margin;
      item.worst_X = X;
      item.worst_s = s;
    }
    ++item.points;
  }
};

}  // namespace

const std::vector<std::string>& bootstrap_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const Spec& s : kSpecs) v.emplace_back(s.id);
    return v;
  }();
  return ids;
}

BootstrapReport check_bootstrap(const std::vector<SelfSimilarFrame>& frames, const ModulationTrack& track,
                                const BootstrapConfig& cfg, std::optional<double> tstar) {
  validate(cfg);
  std::map<std::string, Acc> acc;
  for (const Spec& s : kSpecs) {
    BootstrapItem& it = acc[s.id].item;
    it.id = s.id;
    it.region = s.region;
    it.description = s.description;
  }

  const double eps = cfg.epsilon, M = cfg.M, l = cfg.l();
  const double near_c = std::pow(eps, 0.125) + std::log(M) * std::pow(eps, 0.1);

  for (const SelfSimilarFrame& f : frames) {
    const SpectralGrid& g = f.u.grid();
    const double s = f.s, m = f.m;
    const bool gate = std::pow(m, -1.5) >= cfg.high_derivative_gate * g.dx();
    const double Ls = cfg.L_of_s(s);

    for (std::size_t i = 0; i < f.X.size(); ++i) {
      const double X = f.X[i], a = std::abs(X);
      const profile::ProfileEval pe = profile::bar_u_derivs(X, 5);
      const double w = 1.0 + X * X;
      if (a <= l) {
        acc["near.U_tilde"].upper(X, s, f.D[0][i] - pe.d(0), near_c * std::pow(l, 4));
        acc["near.dU_tilde"].upper(X, s, f.D[1][i] - pe.d(1), near_c * std::pow(l, 3));
        acc["near.d2U_tilde"].upper(X, s, f.D[2][i] - pe.d(2), near_c * l * l);
        acc["near.d3U_tilde"].upper(X, s, f.D[3][i] - pe.d(3), near_c * l);
        if (gate) acc["near.d4U_tilde"].upper(X, s, f.D[4][i] - pe.d(4), std::pow(eps, 0.1));
      } else if (a <= Ls) {
        acc["middle.U_tilde"].upper(X, s, f.D[0][i] - pe.d(0), std::pow(eps, 1.0 / 11.0) * std::pow(w, 1.0 / 6.0));
        acc["middle.dU_tilde"].upper(X, s, f.D[1][i] - pe.d(1), std::pow(eps, 1.0 / 12.0) * std::pow(w, -1.0 / 3.0));
        acc["middle.d2U"].upper(X, s, f.D[2][i], std::pow(M, 0.25) * std::pow(w, -1.0 / 3.0));
        acc["middle.d3U"].upper(X, s, f.D[3][i], 0.5 * std::pow(M, 0.75));
        acc["middle.U"].upper(X, s, f.D[0][i], (1.0 + std::pow(eps, 1.0 / 11.0)) * std::pow(w, 1.0 / 6.0));
        acc["middle.dU"].upper(X, s, f.D[1][i], std::pow(w, -1.0 / 3.0));
      }
    }
    if (!gate)
      acc["near.d4U_tilde"].skip_reason =
          "m^{-3/2} below " + std::to_string(cfg.high_derivative_gate) + " dx on some frames";

    acc["at0.d3U_tilde"].upper(0.0, s, f.nu_hat - 6.0, std::pow(eps, 0.25));
    acc["at0.d3U"].record(0.0, s, std::min(f.nu_hat - 5.0, 7.0 - f.nu_hat));

    // Far field and global norms from the physical state, using
    // ∂ʲ_X U = m^{1/2 - 3j/2} ∂ʲ_x u and |X| >= L(s) <=> |x - ξ| >= 1/2.
    const Field u1 = derivative(f.u, 1), u2 = derivative(f.u, 2), u3 = derivative(f.u, 3);
    const double c1 = 1.0 / m, c2 = std::pow(m, -2.5), c3 = std::pow(m, -4.0);
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double r = g.wrap(g.x(j) - f.xi);
      if (std::abs(r) < 0.5) continue;
      const double X = r * std::pow(m, 1.5);
      acc["far.dU"].upper(X, s, c1 * u1[j], 2.0 * std::exp(-s));
      acc["far.d2U"].upper(X, s, c2 * u2[j], 4.0 * std::pow(M, 0.25) * std::exp(-s));
      acc["far.d3U"].upper(X, s, c3 * u3[j], std::pow(M, 0.75));
    }

    acc["global.dU_L2"].upper(0.0, s, std::exp(-0.25 * s) * norms(u1).l2, 10.0);
    if (gate) acc["global.d5U_L2"].upper(0.0, s, std::pow(m, -6.25) * norms(derivative(f.u, 5)).l2, std::pow(M, 4.0));
    else acc["global.d5U_L2"].skip_reason = "m^{-3/2} below the high-derivative gate on some frames";
    acc["global.U_shift_Linf"].upper(0.0, s, norms(f.u).linf, M);  // same as ||u||_inf <= M

    // Max of |∂_X U| is 1, attained on a single arc around ξ̂.
    {
      const auto ux = u1.samples();
      const double peak = kernels::omp::max_abs(ux) / m;
      const std::size_t n = g.n();
      std::size_t arcs = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const bool in = std::abs(ux[j]) >= 0.5 * m, prev = std::abs(ux[(j + n - 1) % n]) >= 0.5 * m;
        if (in && !prev) ++arcs;
      }
      const double margin = arcs == 1 ? 1.0 - peak : -1.0;
      acc["global.dU_Linf"].record(0.0, s, margin);
    }
  }
  if (!frames.empty()) {
    for (const char* id : {"far.dU", "far.d2U", "far.d3U"})
      if (acc[id].item.points == 0) acc[id].skip_reason = "no grid point with |x - xi| >= 1/2 inside the box";
  }

  for (const TrackEntry& e : track.entries) {
    acc["modulation.tau"].upper(0.0, e.s, e.tau_dot, std::exp(-0.75 * e.s));
    acc["modulation.tau"].upper(0.0, e.s, e.tau, 2.0 * std::pow(eps, 1.75));
    acc["modulation.xi"].upper(0.0, e.s, e.xi_dot, 2.0 * M);
    acc["modulation.xi"].upper(0.0, e.s, e.xi, 3.0 * M * eps);
  }
  if (tstar) acc["modulation.tau"].upper(0.0, std::numeric_limits<double>::quiet_NaN(), *tstar, 2.0 * std::pow(eps, 1.75));

  BootstrapReport rep;
  for (const Spec& sp : kSpecs) {
    Acc& a = acc[sp.id];
    BootstrapItem it = a.item;
    if (it.points == 0) {
      it.status = CheckStatus::unchecked;
      it.reason = a.skip_reason.empty() ? "no sample in region" : a.skip_reason;
    } else {
      it.status = it.worst_margin >= 0.0 ? CheckStatus::pass : CheckStatus::fail;
      if (!a.skip_reason.empty()) it.reason = "partially checked: " + a.skip_reason;
    }
    rep.items.push_back(it);
  }
  return rep;
}

bool InterpolationReport::all_hold(double tol) const {
  return std::all_of(items.begin(), items.end(), [tol](const InterpolationItem& i) { return i.margin >= -tol; });
}

InterpolationReport check_interpolation(const Field& u) {
  std::array<double, 6> N{};
  for (int j = 1; j <= 5; ++j) N[static_cast<std::size_t>(j)] = norms(derivative(u, j)).l2;
  InterpolationReport rep;
  const char* ids[] = {"", "", "d2_L2", "d3_L2", "d4_L2"};
  for (int j = 2; j <= 4; ++j) {
    const double theta = (j - 1) / 4.0;
    InterpolationItem it;
    it.id = ids[j];
    it.j = j;
    it.lhs = N[static_cast<std::size_t>(j)];
    it.rhs = std::pow(N[1], 1.0 - theta) * std::pow(N[5], theta);
    it.margin = it.rhs > 0.0 ? 1.0 - it.lhs / it.rhs : (it.lhs == 0.0 ? 0.0 : -1.0);
    rep.items.push_back(it);
  }
  return rep;
}

double h5_norm(const Field& u) {
  double s = norms(u).l2;
  s *= s;
  for (int j = 1; j <= 5; ++j) {
    const double n = norms(derivative(u, j)).l2;
    s += n * n;
  }
  return std::sqrt(s);
}

RateReport check_blowup_rate_bound(const TimeSeries& series, double tstar, const std::vector<Snapshot>& snapshots) {
  RateReport r;
  const std::vector<Record> sel = final_decade(series);
  r.product_min = std::numeric_limits<double>::infinity();
  r.product_max = -std::numeric_limits<double>::infinity();
  for (const Record& rec : sel) {
    const double p = rec.m * (tstar - rec.t);
    r.product_min = std::min(r.product_min, p);
    r.product_max = std::max(r.product_max, p);
  }
  r.product_ok = !sel.empty() && r.product_min >= 0.5 && r.product_max <= 2.0;

  std::vector<double> lx, ly;
  for (const Snapshot& sn : snapshots) {
    if (!(sn.t < tstar)) continue;
    lx.push_back(std::log(tstar - sn.t));
    ly.push_back(std::log(h5_norm(sn.u)));
  }
  r.h5_points = lx.size();
  if (lx.size() >= 2) {
    double xm = 0, ym = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      xm += lx[i];
      ym += ly[i];
    }
    xm /= static_cast<double>(lx.size());
    ym /= static_cast<double>(lx.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - xm) * (lx[i] - xm);
      sxy += (lx[i] - xm) * (ly[i] - ym);
    }
    r.h5_slope = sxx > 0 ? sxy / sxx : 0.0;
    r.h5_ok = r.h5_slope <= -1.0 + 0.2;
  }
  return r;
}

}  // namespace bhblow
