#include "deadcore/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "deadcore/errors.hpp"
#include "deadcore/exact.hpp"

namespace deadcore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool ball_inside(const Grid& g, const Point& c, double r) {
  const double eps = 1e-9 * g.h();
  if (g.shape() == Shape::disk) return std::hypot(c[0], c[1]) + r <= g.radius() + eps;
  const double x1 = g.x0() + (g.N() - 1) * g.h(), y1 = g.y0() + (g.N() - 1) * g.h();
  return c[0] - r >= g.x0() - eps && c[0] + r <= x1 + eps && c[1] - r >= g.y0() - eps && c[1] + r <= y1 + eps;
}

// Index window of nodes that can lie within distance r of c.
struct Window {
  int i0, i1, j0, j1;
};

Window window(const Grid& g, const Point& c, double r) {
  auto lo = [&](double v, double o) { return std::max(0, static_cast<int>(std::floor((v - r - o) / g.h())) - 1); };
  auto hi = [&](double v, double o) {
    return std::min(g.N() - 1, static_cast<int>(std::ceil((v + r - o) / g.h())) + 1);
  };
  return {lo(c[0], g.x0()), hi(c[0], g.x0()), lo(c[1], g.y0()), hi(c[1], g.y0())};
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

// Squared 1D lower envelope transform (Felzenszwalb-Huttenlocher).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n) {
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  int first = -1;
  for (int q = 0; q < n; ++q)
    if (f[q] < kInf) {
      first = q;
      break;
    }
  if (first < 0) {
    std::fill(d.begin(), d.begin() + n, kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (!(f[q] < kInf)) continue;
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

Field pair_magnitude(const Field& u, const Field& v, const SystemParams& params) {
  require_same_grid(u, v);
  const double eu = 2.0 / params.num_alpha(), ev = 2.0 / params.num_beta();
  Field out(u.grid_ptr(), 0.0);
  for (std::size_t k = 0; k < u.grid().size(); ++k) {
    const double a = u[k] > 0.0 ? std::pow(u[k], eu) : 0.0;
    const double b = v[k] > 0.0 ? std::pow(v[k], ev) : 0.0;
    out[k] = a + b;
  }
  return out;
}

std::vector<Point> extract_free_boundary(const Field& mag, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("free boundary threshold must be > 0");
  const Grid& g = mag.grid();
  std::vector<Point> pts;
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i) {
      if (!g.in_domain(i, j) || mag(i, j) > tol) continue;
      for (int d = 0; d < 4; ++d) {
        const int a = i + di[d], b = j + dj[d];
        if (g.in_domain(a, b) && mag(a, b) > tol) {
          pts.push_back({g.x(i), g.y(j)});
          break;
        }
      }
    }
  return pts;
}

std::vector<double> dyadic_radii(double r_min, double r_max) {
  std::vector<double> out;
  for (int k = 0; k < 60; ++k) {
    const double r = std::ldexp(1.0, -k);
    if (r > r_max * (1 + 1e-12)) continue;
    if (r < r_min * (1 - 1e-12)) break;
    out.push_back(r);
  }
  return out;
}

double ball_sup(const Field& f, const Point& x0, double r) {
  const Grid& g = f.grid();
  const Window w = window(g, x0, r);
  double s = -kInf;
  const double r2 = r * r * (1 + 1e-12);
  for (int j = w.j0; j <= w.j1; ++j)
    for (int i = w.i0; i <= w.i1; ++i) {
      if (!g.in_domain(i, j)) continue;
      const double dx = g.x(i) - x0[0], dy = g.y(j) - x0[1];
      if (dx * dx + dy * dy <= r2) s = std::max(s, f(i, j));
    }
  return s;
}

GrowthFit growth_fit(const Field& mag, const Point& x0, const std::vector<double>& radii) {
  const Grid& g = mag.grid();
  GrowthFit out;
  std::vector<double> lx, ly;
  for (double r : radii) {
    if (r < 4.0 * g.h() * (1 - 1e-12) || !ball_inside(g, x0, r)) continue;
    const double s = ball_sup(mag, x0, r);
    if (!(s > 0.0)) continue;
    out.radii.push_back(r);
    out.sups.push_back(s);
    lx.push_back(std::log(r));
    ly.push_back(std::log(s));
  }
  if (lx.size() < 4) throw FitUnavailableError("growth fit needs at least four usable radii");
  const LineFit f = least_squares(lx, ly);
  out.slope = f.slope;
  out.constant = std::exp(f.intercept);
  out.r2 = f.r2;
  return out;
}

NondegeneracyResult nondegeneracy_check(const Field& mag, const Point& x0, const std::vector<double>& radii,
                                        double kappa, double c_floor) {
  if (!(c_floor > 0.0)) throw ArgumentError("non-degeneracy floor must be > 0");
  const Grid& g = mag.grid();
  NondegeneracyResult out;
  out.min_ratio = kInf;
  for (double r : radii) {
    if (r < 4.0 * g.h() * (1 - 1e-12) || !ball_inside(g, x0, r)) continue;
    const double s = std::max(0.0, ball_sup(mag, x0, r));
    out.radii.push_back(r);
    out.ratios.push_back(s / std::pow(r, kappa));
    out.min_ratio = std::min(out.min_ratio, out.ratios.back());
  }
  if (out.radii.size() < 4) throw FitUnavailableError("non-degeneracy check needs at least four usable radii");
  out.pass = out.min_ratio >= c_floor;
  return out;
}

NondegeneracyResult nondegeneracy_check(const Field& mag, const Point& x0, const std::vector<double>& radii,
                                        const SystemParams& params, std::optional<double> c_floor) {
  const ExponentBundle e = system_exponents(params);
  if (!c_floor) {
    const ConstantPair c = system_constants(params, BarrierKind::sub);
    c_floor = 0.5 * std::pow(c.A, 2.0 / params.num_alpha());
  }
  return nondegeneracy_check(mag, x0, radii, e.kappa, *c_floor);
}

DensityResult density_ratio(const Field& mag, const Point& x0, const std::vector<double>& rho_list, double tol) {
  const Grid& g = mag.grid();
  DensityResult out;
  bool any = false;
  for (double rho : rho_list) {
    if (rho < 2.0 * g.h() * (1 - 1e-12)) throw ResolutionError("density radius below 2h");
    const Window w = window(g, x0, rho);
    std::size_t count = 0;
    const double r2 = rho * rho * (1 + 1e-12);
    for (int j = w.j0; j <= w.j1; ++j)
      for (int i = w.i0; i <= w.i1; ++i) {
        if (!g.in_domain(i, j)) continue;
        const double dx = g.x(i) - x0[0], dy = g.y(j) - x0[1];
        if (dx * dx + dy * dy <= r2 && mag(i, j) > tol) ++count;
      }
    any = any || count > 0;
    out.ratios.push_back(std::min(1.0, count * g.h() * g.h() / (std::numbers::pi * rho * rho)));
  }
  if (!any) out.warning = "no positivity near the probe point; it is not on a free boundary";
  return out;
}

std::vector<double> distance_to_marked(const Grid& g, const std::vector<char>& marked) {
  const int N = g.N();
  std::vector<double> tmp(g.size()), col(N), out(N), res(g.size());
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) col[i] = marked[g.index(i, j)] ? 0.0 : kInf;
    edt_1d(col, out, N);
    for (int i = 0; i < N; ++i) tmp[g.index(i, j)] = out[i];
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) col[j] = tmp[g.index(i, j)];
    edt_1d(col, out, N);
    for (int j = 0; j < N; ++j) res[g.index(i, j)] = std::sqrt(out[j]) * g.h();
  }
  return res;
}

double porosity_probe(const Field& mag, const std::vector<Point>& fb_points, const std::vector<double>& r_list) {
  if (fb_points.empty()) throw ArgumentError("porosity probe needs free boundary points");
  if (r_list.empty()) throw ArgumentError("porosity probe needs radii");
  const Grid& g = mag.grid();
  std::vector<char> marked(g.size(), 0);
  for (const Point& p : fb_points) {
    const int i = static_cast<int>(std::lround((p[0] - g.x0()) / g.h()));
    const int j = static_cast<int>(std::lround((p[1] - g.y0()) / g.h()));
    if (g.in_grid(i, j)) marked[g.index(i, j)] = 1;
  }
  const auto dist = distance_to_marked(g, marked);
  double tau = kInf;
  for (const Point& x : fb_points)
    for (double r : r_list) {
      const Window w = window(g, x, r);
      double best = 0.0;
      for (int j = w.j0; j <= w.j1; ++j)
        for (int i = w.i0; i <= w.i1; ++i) {
          if (!g.in_domain(i, j)) continue;
          const double d = std::hypot(g.x(i) - x[0], g.y(j) - x[1]);
          if (d > r) continue;
          best = std::max(best, std::min(r - d, dist[g.index(i, j)]));
        }
      tau = std::min(tau, best / r);
    }
  return tau;
}

Field rescale_field(const Field& f, const GridPtr& target, const Point& z0, double tau, double exponent) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ArgumentError("blow-up scale must lie in (0, 1]");
  const Grid& src = f.grid();
  const Grid& g = *target;
  Field out(target, 0.0);
  const double s = std::pow(tau, -exponent);
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i) {
      const double px = z0[0] + tau * g.x(i), py = z0[1] + tau * g.y(j);
      if (!src.contains(px, py)) {
        if (g.in_domain(i, j)) throw DomainError("blow-up samples outside the source domain");
        continue;
      }
      out(i, j) = s * f.interpolate(px, py);
    }
  return out;
}

std::pair<Field, Field> blowup_rescale(const Field& u, const Field& v, const Point& z0, double tau,
                                       const SystemParams& params) {
  require_same_grid(u, v);
  const ExponentBundle e = system_exponents(params);
  const GridPtr target = Grid::disk(u.grid().N(), 1.0);
  return {rescale_field(u, target, z0, tau, e.alpha_u), rescale_field(v, target, z0, tau, e.beta_v)};
}

double sup_error_on_ball(const Field& f, const std::function<double(double, double)>& g, double radius) {
  const Grid& gr = f.grid();
  double e = 0.0;
  for (int j = 0; j < gr.N(); ++j)
    for (int i = 0; i < gr.N(); ++i) {
      if (!gr.in_domain(i, j) || std::hypot(gr.x(i), gr.y(j)) > radius) continue;
      e = std::max(e, std::abs(f(i, j) - g(gr.x(i), gr.y(j))));
    }
  return e;
}

std::string to_string(LiouvilleVerdict v) { return v == LiouvilleVerdict::vanishes ? "vanishes" : "above_threshold"; }

LiouvilleReport liouville_decay_check(const Field& mag, const SystemParams& params, double m, double tol) {
  const Grid& g = mag.grid();
  if (g.shape() != Shape::disk) throw PreconditionError("liouville check needs a disk domain");
  const double R = g.radius();
  if (R < 4.0) throw PreconditionError("liouville check needs a domain radius R >= 4");
  const double kappa = system_exponents(params).kappa;
  LiouvilleReport out;
  out.threshold = m;
  for (int k = 0; k < 3; ++k) {
    const double outer = R * std::ldexp(1.0, -k), inner = outer / 2.0;
    if (inner < 4.0 * g.h()) break;
    double best = 0.0;
    std::size_t nodes = 0;
    for (int j = 0; j < g.N(); ++j)
      for (int i = 0; i < g.N(); ++i) {
        if (!g.in_domain(i, j)) continue;
        const double r = std::hypot(g.x(i), g.y(j));
        if (r < inner || r > outer) continue;
        ++nodes;
        best = std::max(best, mag(i, j) / std::pow(r, kappa));
      }
    if (nodes == 0) break;
    out.annulus_inner.push_back(inner);
    out.annulus_ratio.push_back(best);
  }
  if (out.annulus_ratio.size() < 3) throw ResolutionError("liouville check needs three resolved dyadic annuli");
  out.ratio = *std::max_element(out.annulus_ratio.begin(), out.annulus_ratio.end());
  double inner_max = 0.0;
  for (int j = 0; j < g.N(); ++j)
    for (int i = 0; i < g.N(); ++i)
      if (g.in_domain(i, j) && std::hypot(g.x(i), g.y(j)) <= R / 4.0) inner_max = std::max(inner_max, mag(i, j));
  out.verdict = (out.ratio < m && inner_max <= tol) ? LiouvilleVerdict::vanishes : LiouvilleVerdict::above_threshold;
  return out;
}

HenonReport henon_checks(const Field& u, const HenonParams& params, const HenonCheckOptions& opts) {
  if (opts.residual > opts.solver_tol) throw PreconditionError("henon checks need a converged solve");
  const auto warnings = params.validate(true);
  (void)warnings;
  const Grid& g = u.grid();
  HenonReport out;
  out.critical_case = params.mu == 1.0 + params.p;
  out.min_u = kInf;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.kind(k) != NodeKind::exterior) out.min_u = std::min(out.min_u, u[k]);
  out.positivity_pass = !out.critical_case || out.min_u > 0.0;

  // Critical points: zero-set nodes next to positivity (u >= 0 makes every
  // zero a minimum); without a zero set, the interior discrete local minima.
  std::vector<char> zero(g.size(), 0);
  std::vector<Point> crit;
  const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1}, dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  bool any_zero = false;
  for (int j = 1; j + 1 < g.N(); ++j)
    for (int i = 1; i + 1 < g.N(); ++i)
      if (g.interior(i, j) && u(i, j) <= opts.tol) {
        zero[g.index(i, j)] = 1;
        any_zero = true;
      }
  for (int j = 1; j + 1 < g.N(); ++j)
    for (int i = 1; i + 1 < g.N(); ++i) {
      if (!g.interior(i, j)) continue;
      if (any_zero) {
        if (!zero[g.index(i, j)]) continue;
        bool edge = false;
        for (int d = 0; d < 4; ++d) edge = edge || u(i + di[d], j + dj[d]) > opts.tol;
        if (edge) crit.push_back({g.x(i), g.y(j)});
      } else {
        bool minimum = true;
        for (int d = 0; d < 8; ++d) minimum = minimum && g.in_domain(i + di[d], j + dj[d]) && u(i, j) <= u(i + di[d], j + dj[d]);
        if (minimum) {
          zero[g.index(i, j)] = 1;
          crit.push_back({g.x(i), g.y(j)});
        }
      }
    }
  out.critical_points = crit.size();

  if (!out.critical_case) {
    const HenonExponents e = henon_exponents(params);
    const double C1 = henon_constant(params);
    out.expected_gradient_slope = e.grad_h;
    const auto radii = dyadic_radii(4.0 * g.h(), opts.r_max);
    out.nondegeneracy_min_ratio = kInf;
    for (const Point& x0 : crit)
      for (double r : radii) {
        if (!ball_inside(g, x0, r)) continue;
        const Window w = window(g, x0, r + g.h());
        double s = 0.0;
        for (int j = w.j0; j <= w.j1; ++j)
          for (int i = w.i0; i <= w.i1; ++i) {
            if (!g.in_domain(i, j)) continue;
            const double d = std::hypot(g.x(i) - x0[0], g.y(j) - x0[1]);
            if (std::abs(d - r) <= 0.5 * g.h()) s = std::max(s, u(i, j));
          }
        out.nondegeneracy_min_ratio = std::min(out.nondegeneracy_min_ratio, s / (C1 * std::pow(r, e.beta_h)));
      }
    if (crit.empty()) out.nondegeneracy_min_ratio = 0.0;
    out.nondegeneracy_pass = !crit.empty() && out.nondegeneracy_min_ratio >= 1.0 - opts.fit_slack;

    // Gradient growth against the distance to the zero set.
    const auto dist = distance_to_marked(g, zero);
    std::vector<double> lx, ly;
    for (int j = 1; j + 1 < g.N(); ++j)
      for (int i = 1; i + 1 < g.N(); ++i) {
        const std::size_t k = g.index(i, j);
        if (!g.interior(i, j) || zero[k] || !(dist[k] >= 4.0 * g.h()) || dist[k] > opts.r_max) continue;
        if (!(g.interior(i + 1, j) && g.interior(i - 1, j) && g.interior(i, j + 1) && g.interior(i, j - 1))) continue;
        const double gx = (u(i + 1, j) - u(i - 1, j)) / (2 * g.h());
        const double gy = (u(i, j + 1) - u(i, j - 1)) / (2 * g.h());
        const double gn = std::hypot(gx, gy);
        if (!(gn > 0.0)) continue;
        lx.push_back(std::log(dist[k]));
        ly.push_back(std::log(gn));
      }
    if (lx.size() >= 4) {
      const LineFit f = least_squares(lx, ly);
      out.gradient_slope = f.slope;
      out.gradient_r2 = f.r2;
    }
  }
  if (!(out.min_u < kInf)) out.min_u = 0.0;
  return out;
}

FreeBoundaryReport analyze_free_boundary(const Field& u, const Field& v, const SystemParams& params,
                                         const FreeBoundaryOptions& opts) {
  const Field mag = pair_magnitude(u, v, params);
  const Grid& g = mag.grid();
  FreeBoundaryReport rep;
  rep.expected_exponent = system_exponents(params).kappa;
  rep.fb_points = extract_free_boundary(mag, opts.tol);
  if (rep.fb_points.empty()) throw FitUnavailableError("no free boundary found");
  // Free boundary point closest to the positive x axis.
  double best = kInf;
  for (const Point& p : rep.fb_points) {
    const double ang = std::abs(std::atan2(p[1], p[0]));
    const double key = ang + 1e-9 * std::hypot(p[0], p[1]);
    if (key < best) {
      best = key;
      rep.x0 = p;
    }
  }
  const auto radii = dyadic_radii(4.0 * g.h(), opts.r_max);
  const GrowthFit fit = growth_fit(mag, rep.x0, radii);
  rep.fitted_exponent = fit.slope;
  rep.fitted_constant = fit.constant;
  rep.r_squared = fit.r2;
  rep.fit_window = {fit.radii.back(), fit.radii.front()};
  for (std::size_t k = 0; k < fit.radii.size(); ++k) rep.loglog.emplace_back(std::log(fit.radii[k]), std::log(fit.sups[k]));
  rep.nondegeneracy_min_ratio = nondegeneracy_check(mag, rep.x0, fit.radii, rep.expected_exponent, 1e-300).min_ratio;
  const auto dens = density_ratio(mag, rep.x0, fit.radii, opts.tol);
  rep.density_min_ratio = *std::min_element(dens.ratios.begin(), dens.ratios.end());
  std::vector<double> pr;
  for (double r : fit.radii)
    if (r <= opts.porosity_r_max * (1 + 1e-12)) pr.push_back(r);
  if (pr.empty()) pr.push_back(fit.radii.back());
  rep.porosity_radius_fraction = porosity_probe(mag, rep.fb_points, pr);
  return rep;
}

}  // namespace deadcore
