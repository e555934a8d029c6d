#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deadcore/params.hpp"

namespace deadcore {

struct RadialOptions {
  /// Gradient regularization; <= 0 means the mesh width.
  double delta = -1.0;
  /// Smoothing width of sub-linear reaction laws near zero (see reaction_power).
  double eta = 1e-14;
  /// Free boundary threshold is fb_factor * machine epsilon * max(bc).
  double fb_factor = 10.0;
  /// > 0 enables pseudo-transient continuation.
  double pseudo_dt = 0.0;
};

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> v;  ///< empty for Henon runs
  std::variant<SystemParams, HenonParams> params;
  double bc_scale = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double fb_factor = 10.0;

  bool has_v() const { return !v.empty(); }
  /// max(u, v) at node k.
  double magnitude(std::size_t k) const;
  /// Scanning inward from R, radius of the first node below the threshold.
  std::optional<double> free_boundary_radius() const;
  std::optional<std::size_t> free_boundary_node() const;
};

/// Radial dead-core system in dimension params.n with Dirichlet data at R,
/// symmetric at 0, trace operator scaled by ell_hi. N mesh intervals.
RadialProfile solve_radial_system(const SystemParams& params, double R, double bc_u, double bc_v, int N,
                                  double tol, int max_iter, const RadialOptions& opts = {});

RadialProfile solve_radial_henon(const HenonParams& params, double R, double bc, int N, double tol,
                                 int max_iter, const RadialOptions& opts = {});

struct RadialFit {
  double slope = 0.0;
  double r2 = 0.0;
  double deviation = 0.0;  ///< slope / expected - 1
  double rho = 0.0;
  double constant = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log u against log(r - rho) over (rho, 2 rho].
/// The free boundary radius is located to sub-cell accuracy by maximizing the
/// fit quality over rho between the last dead node and the first live one.
RadialFit fit_growth_radial(const RadialProfile& profile, double expected);

/// Columns r,u,v (or r,u) with a header row.
void write_profile_csv(const RadialProfile& profile, const std::string& path);

/// Free boundary radii implied by the barrier pairs: an outer-data
/// supersolution A(r - rho)^alpha gives the lower end, the one-dimensional
/// subsolution constants the upper end. Both clamped to [0, R].
struct RadiusBracket {
  double lower = 0.0;
  double upper = 0.0;
};
RadiusBracket dead_core_bracket(const SystemParams& params, double R, double bc_u, double bc_v);

}  // namespace deadcore
