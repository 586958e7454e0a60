#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhblow/grid.hpp"

namespace bhblow {

struct DataSpec {
  double epsilon = 1e-2;
  double M = 50.0;
  double cutoff_inner = 0.5;
  double cutoff_outer = 1.0;
  double kappa0 = 0.0;
  /// Amplitude of the optional perturbation, in self-similar units; must not
  /// exceed epsilon^{1/8}. Zero disables it.
  double perturbation = 0.0;
  std::uint64_t seed = 1;
};

/// Throws ParameterError when the spec is inconsistent with a box of half
/// width L.
void validate(const DataSpec& spec, double half_width);

/// Smooth step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step(double t);
/// Plateau cutoff: 1 on |x| <= inner, 0 on |x| >= outer.
double plateau_cutoff(double x, double inner, double outer);

/// eps^{1/2} Ū(x / eps^{3/2}) φ(x) + κ0, without any range check on eps.
double scaled_profile_cutoff(double x, double eps, double inner, double outer, double kappa0);

/// u0 on the grid. Throws ResolutionError when dx > eps^{3/2}/8.
Field build_u0(const DataSpec& spec, const GridPtr& grid);

struct AuditItem {
  std::string name;
  std::string description;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // positive when the condition holds
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditItem> items;
  double slope_location = 0.0;
  bool slope_unique = false;
  bool all_pass() const;
};

/// Numerical check of the initial-data conditions; report only.
AuditReport audit_u0(const Field& u0, const DataSpec& spec);

}  // namespace bhblow
