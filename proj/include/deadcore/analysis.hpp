#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deadcore/grid.hpp"
#include "deadcore/params.hpp"

namespace deadcore {

using Point = std::array<double, 2>;

/// u_+^(2/num_alpha) + v_+^(2/num_beta).
Field pair_magnitude(const Field& u, const Field& v, const SystemParams& params);

/// Domain nodes with mag <= tol that have a 4-neighbour with mag > tol.
std::vector<Point> extract_free_boundary(const Field& mag, double tol);

/// Dyadic radii 2^-k inside [r_min, r_max], decreasing.
std::vector<double> dyadic_radii(double r_min, double r_max);

/// Max of f over domain nodes within distance r of x0; -inf if there are none.
double ball_sup(const Field& f, const Point& x0, double r);

struct GrowthFit {
  double slope = 0.0;
  double constant = 0.0;
  double r2 = 0.0;
  std::vector<double> radii;  ///< radii actually used
  std::vector<double> sups;   ///< S(r) at those radii
};

/// Least-squares fit of log S(r) = log c + slope log r with S(r) the ball sup.
/// Radii below 4h, balls leaving the domain and S(r) <= 0 are skipped; fewer
/// than four usable radii raise FitUnavailableError.
GrowthFit growth_fit(const Field& mag, const Point& x0, const std::vector<double>& radii);

struct NondegeneracyResult {
  double min_ratio = 0.0;
  bool pass = false;
  std::vector<double> radii;
  std::vector<double> ratios;
};

/// min over radii of S(r) / r^kappa against c_floor.
NondegeneracyResult nondegeneracy_check(const Field& mag, const Point& x0, const std::vector<double>& radii,
                                        double kappa, double c_floor);

/// Same with kappa from the system and c_floor defaulting to half the
/// sub-barrier value A^(2/num_alpha) (clamped A from ell_lo).
NondegeneracyResult nondegeneracy_check(const Field& mag, const Point& x0, const std::vector<double>& radii,
                                        const SystemParams& params, std::optional<double> c_floor = {});

struct DensityResult {
  std::vector<double> ratios;
  std::optional<std::string> warning;
};

/// Fraction of the ball B_rho(x0) covered by cells with mag > tol.
/// rho < 2h raises ResolutionError.
DensityResult density_ratio(const Field& mag, const Point& x0, const std::vector<double>& rho_list, double tol);

/// Largest tau such that for every free boundary point x and radius r some
/// ball B_{tau r}(y) inside B_r(x) misses the free boundary set.
double porosity_probe(const Field& mag, const std::vector<Point>& fb_points, const std::vector<double>& r_list);

/// Euclidean distance from every node to the nearest marked node (exact
/// two-pass transform on the lattice); +inf if nothing is marked.
std::vector<double> distance_to_marked(const Grid& g, const std::vector<char>& marked);

/// u(z0 + tau x) / tau^alpha and v(z0 + tau x) / tau^beta on a fresh unit
/// disk with the same node count.
std::pair<Field, Field> blowup_rescale(const Field& u, const Field& v, const Point& z0, double tau,
                                       const SystemParams& params);

/// Rescaling of a single field with an explicit exponent.
Field rescale_field(const Field& f, const GridPtr& target, const Point& z0, double tau, double exponent);

/// Sup of |f - g| over domain nodes with |x| <= radius.
double sup_error_on_ball(const Field& f, const std::function<double(double, double)>& g, double radius);

enum class LiouvilleVerdict { vanishes, above_threshold };
std::string to_string(LiouvilleVerdict v);

struct LiouvilleReport {
  double ratio = 0.0;
  double threshold = 0.0;
  LiouvilleVerdict verdict = LiouvilleVerdict::above_threshold;
  std::vector<double> annulus_inner;
  std::vector<double> annulus_ratio;
};

/// Ratio sup mag / r^kappa over the three outermost dyadic annuli of a
/// radius-R disk (R >= 4). "vanishes" needs ratio < m and the inner
/// quarter-disk below tol.
LiouvilleReport liouville_decay_check(const Field& mag, const SystemParams& params, double m, double tol = 1e-12);

struct HenonCheckOptions {
  double tol = 1e-7;
  double fit_slack = 0.05;
  /// Residual of the solve that produced u; must not exceed solver_tol.
  double residual = 0.0;
  double solver_tol = 1e-8;
  double r_max = 0.3;
};

struct HenonReport {
  std::size_t critical_points = 0;
  /// min over critical points and radii of sup_{|y-x0|=r} u / (C1 r^beta_H).
  double nondegeneracy_min_ratio = 0.0;
  bool nondegeneracy_pass = false;
  bool critical_case = false;
  double min_u = 0.0;
  bool positivity_pass = true;
  double gradient_slope = 0.0;
  double gradient_r2 = 0.0;
  double expected_gradient_slope = 0.0;
};

HenonReport henon_checks(const Field& u, const HenonParams& params, const HenonCheckOptions& opts = {});

struct FreeBoundaryReport {
  std::vector<Point> fb_points;
  double fitted_exponent = 0.0;
  double fitted_constant = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double r_squared = 0.0;
  double density_min_ratio = 0.0;
  double porosity_radius_fraction = 0.0;
  Point x0{0.0, 0.0};
  double expected_exponent = 0.0;
  double nondegeneracy_min_ratio = 0.0;
  /// log r against log S(r) of the growth fit.
  std::vector<std::pair<double, double>> loglog;
};

struct FreeBoundaryOptions {
  double tol = 1e-7;
  double r_max = 0.3;
  double porosity_r_max = 0.1;
};

/// Free boundary of the pair, growth fit at the free boundary point closest
/// to the positive x axis, minimum density over the fit radii and porosity.
FreeBoundaryReport analyze_free_boundary(const Field& u, const Field& v, const SystemParams& params,
                                         const FreeBoundaryOptions& opts = {});

}  // namespace deadcore
