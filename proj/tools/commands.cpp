#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "deadcore/analysis.hpp"
#include "deadcore/errors.hpp"
#include "deadcore/exact.hpp"
#include "deadcore/field_io.hpp"
#include "deadcore/gridsolver.hpp"
#include "deadcore/operators.hpp"
#include "deadcore/radial.hpp"
#include "deadcore/report.hpp"

namespace deadcore::cli {

namespace {

std::string path_in(const Context& ctx, const std::string& name) {
  return (std::filesystem::path(ctx.out) / name).string();
}

void emit(const Context& ctx, const Report& rep, const std::string& stem) {
  rep.write(path_in(ctx, stem));
  std::cout << rep.to_text();
}

SystemParams system_from(const Config& c) {
  SystemParams s;
  s.p = c.get_double("system", "p", 0.0);
  s.q = c.get_double("system", "q", 0.0);
  s.lambda1 = c.get_double("system", "lambda1", 0.0);
  s.lambda2 = c.get_double("system", "lambda2", 0.0);
  s.ell_lo = c.get_double("system", "ell_lo", 1.0);
  s.ell_hi = c.get_double("system", "ell_hi", 1.0);
  s.n = c.get_int("system", "n", 2);
  s.validate();
  return s;
}

HenonParams henon_from(const Config& c) {
  HenonParams h;
  h.p = c.get_double("henon", "p", 0.0);
  h.mu = c.get_double("henon", "mu", 0.0);
  h.alpha = c.get_double("henon", "alpha", 0.0);
  h.ell_lo = c.get_double("henon", "ell_lo", 1.0);
  h.ell_hi = c.get_double("henon", "ell_hi", 1.0);
  h.n = c.get_int("henon", "n", 2);
  for (const auto& w : h.validate(true)) std::cerr << "warning: " << w << "\n";
  return h;
}

OperatorSpec operator_from(const Config& c, double lo, double hi) {
  const std::string kind = c.get_string("operator", "kind", "trace");
  if (kind == "trace") return OperatorSpec::trace_identity(hi);
  if (kind == "pucci_plus") return OperatorSpec::pucci_plus(lo, hi);
  if (kind == "pucci_minus") return OperatorSpec::pucci_minus(lo, hi);
  throw ConfigError("[operator] kind must be trace, pucci_plus or pucci_minus");
}

SolveConfig solver_from(const Context& ctx) {
  const Config& c = ctx.cfg;
  SolveConfig s;
  s.delta = c.get_double("solver", "delta", s.delta);
  s.tol = c.get_double("solver", "tol", s.tol);
  s.max_iter = c.get_int("solver", "max_iter", s.max_iter);
  s.damping = c.get_double("solver", "damping", s.damping);
  s.pseudo_dt = c.get_optional_double("solver", "pseudo_dt");
  s.eta = c.get_double("solver", "eta", s.eta);
  s.coarsest_h = c.get_double("solver", "coarsest_h", s.coarsest_h);
  s.exec = ctx.exec;
  s.validate();
  return s;
}

GridPtr grid_from(const Config& c) {
  const double R = c.get_double("grid", "R", 1.0);
  int N = c.get_int("grid", "N", 0);
  const double h = c.get_double("grid", "h", 0.0);
  if (N == 0 && h > 0.0) N = static_cast<int>(std::lround(2.0 * R / h)) + 1;
  if (N == 0) N = 257;
  if (N < 5) throw ConfigError("[grid] needs N >= 5");
  return Grid::disk(N, R);
}

Field read_field(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ArgumentError("field file not found: " + path);
  return std::filesystem::path(path).extension() == ".bin" ? read_field_binary(path) : read_field_csv(path);
}

double parse_bc(const Config& c, const std::string& sec, const std::string& key, double fallback, double exact) {
  const std::string v = c.get_string(sec, key, "");
  if (v.empty()) return fallback;
  if (v == "exact") return exact;
  Config one = Config::parse("x = " + v, "[" + sec + "] " + key);
  return one.get_double("", "x", 0.0);
}

void write_fields(const Context& ctx, const Field& f, const std::string& stem) {
  write_field_csv(f, path_in(ctx, stem + ".csv"));
  write_field_binary(f, path_in(ctx, stem + ".bin"));
}

}  // namespace

int cmd_verify_exact(const Context& ctx) {
  const Config& c = ctx.cfg;
  const int cases = c.get_int("exact", "cases", 20);
  const double tol = c.get_double("exact", "tol", 1e-10);
  const double r_min = c.get_double("exact", "r_min", 0.05);
  const double r_max = c.get_double("exact", "r_max", 1.0);
  const int samples = c.get_int("exact", "samples", 64);
  const std::string form_name = c.get_string("exact", "coordinate_form", "corrected");
  if (form_name != "corrected" && form_name != "paper_literal") {
    throw ConfigError("[exact] coordinate_form must be corrected or paper_literal");
  }
  const CoefficientForm form = form_name == "corrected" ? CoefficientForm::corrected : CoefficientForm::paper_literal;
  std::optional<SystemParams> extra;
  if (c.has_section("system")) extra = system_from(c);
  c.check_consumed();
  if (cases < 0 || samples < 2 || !(r_min > 0.0 && r_max > r_min)) throw ConfigError("[exact] invalid sampling");

  std::vector<std::string> names;
  std::vector<double> res_u, res_v;
  auto radii = [&](int k) { return r_min + (r_max - r_min) * k / (samples - 1); };
  auto run_system = [&](const std::string& name, const SystemParams& sp) {
    const auto [su, sv] = entire_pair(sp, BarrierKind::super);
    double eu = 0.0, ev = 0.0;
    for (int k = 0; k < samples; ++k) {
      const auto r = relative_residual_radial(su, sv, sp, RadialOperator::trace_identity, radii(k));
      eu = std::max(eu, std::abs(r.first));
      ev = std::max(ev, std::abs(r.second));
    }
    names.push_back(name);
    res_u.push_back(eu);
    res_v.push_back(ev);
  };

  std::mt19937_64 rng(ctx.seed);
  for (int k = 0; k < cases; ++k) run_system("random_" + std::to_string(k), random_system_params(rng, 1 + k % 3));
  run_system("laplacian_pair_n2", SystemParams{0, 0, 0, 0, 1, 1, 2});
  run_system("sqrt_pair_n1", SystemParams{0, 0, 0.5, 0.5, 1, 1, 1});
  if (extra) run_system("config_system", *extra);

  auto run_henon = [&](const std::string& name, const HenonParams& hp) {
    const RadialSolution s{henon_constant(hp), henon_exponents(hp).beta_h, {}, 0.0};
    double e = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double r = radii(k);
      const double rhs = std::pow(r, hp.alpha) * std::pow(s.value_r(r), hp.mu);
      e = std::max(e, std::abs(henon_residual_radial(s, hp, r)) / std::max(rhs, 1e-300));
    }
    names.push_back(name);
    res_u.push_back(e);
    res_v.push_back(0.0);
  };
  run_henon("henon_p1_mu05_a1_n2", HenonParams{1, 0.5, 1, 1, 1, 2});
  run_henon("henon_p0_mu0_a1_n2", HenonParams{0, 0, 1, 1, 1, 2});

  auto run_coordinate = [&](const std::string& name, const HenonParams& hp) {
    const CoordinateProfile prof = coordinate_solution(hp, 1, form);
    double e = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double t = radii(k);
      const double rhs = std::pow(t, hp.alpha) * std::pow(prof.value(t), hp.mu);
      e = std::max(e, std::abs(coordinate_residual(prof, hp, t)) / std::max(rhs, 1e-300));
    }
    names.push_back(name);
    res_u.push_back(e);
    res_v.push_back(0.0);
  };
  run_coordinate("coordinate_p0_mu05_a0_n1", HenonParams{0, 0.5, 0, 1, 1, 1});
  run_coordinate("coordinate_p0_mu0_a1_n1", HenonParams{0, 0, 1, 1, 1, 1});

  std::vector<double> idx, pass;
  std::vector<std::string> failing;
  double worst = 0.0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const double e = std::max(res_u[k], res_v[k]);
    worst = std::max(worst, e);
    idx.push_back(static_cast<double>(k));
    pass.push_back(e <= tol ? 1.0 : 0.0);
    if (!(e <= tol)) failing.push_back(names[k]);
    std::cout << names[k] << "  res_u=" << res_u[k] << "  res_v=" << res_v[k] << (e <= tol ? "" : "  FAIL") << "\n";
  }
  write_table_csv(path_in(ctx, "exact_residuals.csv"), {"case", "res_u", "res_v", "pass"}, {idx, res_u, res_v, pass});
  Report rep;
  rep.set("command", "verify-exact");
  rep.set("seed", static_cast<long long>(ctx.seed));
  rep.set("random_cases", cases);
  rep.set("total_cases", names.size());
  rep.set("coordinate_form", form_name);
  rep.set("tolerance", tol);
  rep.set("max_relative_residual", worst);
  std::string f;
  for (const auto& n : failing) f += (f.empty() ? "" : ",") + n;
  rep.set("failing", f);
  rep.set("all_pass", failing.empty());
  emit(ctx, rep, "verify_exact");
  return failing.empty() ? 0 : 1;
}

int cmd_solve_radial(const Context& ctx) {
  const Config& c = ctx.cfg;
  const bool henon = c.has_section("henon");
  const double R = c.get_double("radial", "R", 1.0);
  const int N = c.get_int("radial", "N", 2000);
  const double tol = c.get_double("radial", "tol", 1e-8);
  const int max_iter = c.get_int("radial", "max_iter", 100);
  RadialOptions opts;
  opts.eta = c.get_double("radial", "eta", opts.eta);
  opts.delta = c.get_double("radial", "delta", opts.delta);
  opts.fb_factor = c.get_double("radial", "fb_factor", opts.fb_factor);
  opts.pseudo_dt = c.get_double("radial", "pseudo_dt", opts.pseudo_dt);
  const bool exact_check = c.get_bool("radial", "exact_check", false);
  const double exact_tol = c.get_double("radial", "exact_tol", 1e-4);

  Report rep;
  rep.set("command", "solve-radial");
  bool ok = true;
  if (henon) {
    const HenonParams hp = henon_from(c);
    const double C1 = henon_constant(hp);
    const double beta = henon_exponents(hp).beta_h;
    const double bc = parse_bc(c, "radial", "bc", C1 * std::pow(R, beta), C1 * std::pow(R, beta));
    c.check_consumed();
    const RadialProfile prof = solve_radial_henon(hp, R, bc, N, tol, max_iter, opts);
    write_profile_csv(prof, path_in(ctx, "profile.csv"));
    rep.set("kind", "henon");
    rep.set("iterations", prof.iterations);
    rep.set("residual", prof.residual);
    rep.set("C1", C1);
    rep.set("beta_h", beta);
    double err = 0.0;
    for (std::size_t k = 0; k < prof.r.size(); ++k) err = std::max(err, std::abs(prof.u[k] - C1 * std::pow(prof.r[k], beta)));
    rep.set("max_error_exact", err);
    if (exact_check) {
      rep.set("exact_tol", exact_tol);
      ok = err <= exact_tol;
    }
  } else {
    const SystemParams sp = system_from(c);
    const ConstantPair cp = system_constants(sp, BarrierKind::super);
    const ExponentBundle e = system_exponents(sp);
    const double bu = parse_bc(c, "radial", "bc_u", 1.0, cp.A * std::pow(R, e.alpha_u));
    const double bv = parse_bc(c, "radial", "bc_v", 1.0, cp.B * std::pow(R, e.beta_v));
    c.check_consumed();
    const RadialProfile prof = solve_radial_system(sp, R, bu, bv, N, tol, max_iter, opts);
    write_profile_csv(prof, path_in(ctx, "profile.csv"));
    rep.set("kind", "system");
    rep.set("iterations", prof.iterations);
    rep.set("residual", prof.residual);
    double eu = 0.0, ev = 0.0;
    for (std::size_t k = 0; k < prof.r.size(); ++k) {
      eu = std::max(eu, std::abs(prof.u[k] - cp.A * std::pow(prof.r[k], e.alpha_u)));
      ev = std::max(ev, std::abs(prof.v[k] - cp.B * std::pow(prof.r[k], e.beta_v)));
    }
    rep.set("max_error_entire_u", eu);
    rep.set("max_error_entire_v", ev);
    if (exact_check) {
      rep.set("exact_tol", exact_tol);
      ok = std::max(eu, ev) <= exact_tol;
    }
    const auto rho = prof.free_boundary_radius();
    rep.set("dead_core", rho.has_value());
    const RadiusBracket br = dead_core_bracket(sp, R, bu, bv);
    rep.set("bracket_lower", br.lower);
    rep.set("bracket_upper", br.upper);
    if (rho) {
      rep.set("free_boundary_radius", *rho);
      try {
        const RadialFit fit = fit_growth_radial(prof, e.alpha_u);
        rep.set("fitted_exponent", fit.slope);
        rep.set("fitted_rho", fit.rho);
        rep.set("fit_r2", fit.r2);
        rep.set("expected_exponent", e.alpha_u);
      } catch (const FitUnavailableError& ex) {
        rep.set("fit", std::string("unavailable: ") + ex.what());
      }
    }
  }
  rep.set("pass", ok);
  emit(ctx, rep, "solve_radial");
  return ok ? 0 : 1;
}

int cmd_solve_grid(const Context& ctx) {
  const Config& c = ctx.cfg;
  const SystemParams sp = system_from(c);
  const OperatorSpec op = operator_from(c, sp.ell_lo, sp.ell_hi);
  const GridPtr grid = grid_from(c);
  SolveConfig sc = solver_from(ctx);
  const std::vector<double> schedule = c.get_list("solver", "epsilon", {1.0, 0.1, 0.01, 0.0});
  const double bu = c.get_double("boundary", "u", 1.0);
  const double bv = c.get_double("boundary", "v", 1.0);
  FreeBoundaryOptions fo;
  fo.tol = c.get_double("analysis", "tol", 10.0 * sc.tol);
  fo.r_max = c.get_double("analysis", "r_max", fo.r_max);
  fo.porosity_r_max = c.get_double("analysis", "porosity_r_max", fo.porosity_r_max);
  const bool check_exp = c.get_bool("analysis", "check_exponent", false);
  const double exp_tol = c.get_double("analysis", "exponent_tol", 0.1);
  const bool write_csv = c.get_bool("output", "csv", true);
  c.check_consumed();

  const TracePair bc{BoundaryTrace::constant(bu), BoundaryTrace::constant(bv)};
  const DeadcoreSolution sol = solve_deadcore(sp, {op, op}, bc, sc, grid, schedule);
  if (write_csv) {
    write_fields(ctx, sol.u, "u");
    write_fields(ctx, sol.v, "v");
  } else {
    write_field_binary(sol.u, path_in(ctx, "u.bin"));
    write_field_binary(sol.v, path_in(ctx, "v.bin"));
  }
  std::vector<double> eps, its, res;
  for (const auto& st : sol.stages) {
    eps.push_back(st.epsilon);
    its.push_back(st.diagnostics.iterations);
    res.push_back(st.diagnostics.residual);
  }
  write_table_csv(path_in(ctx, "stages.csv"), {"epsilon", "iterations", "residual"}, {eps, its, res});

  // Independent check of the final stage with the reference residual.
  const double delta = sc.delta > 0.0 ? sc.delta : grid->h();
  Field rhs_u(grid, 0.0), rhs_v(grid, 0.0);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    rhs_u[k] = (sol.v[k] > 0.0 ? std::pow(sol.v[k], sp.lambda1) : 0.0) + schedule.back();
    rhs_v[k] = (sol.u[k] > 0.0 ? std::pow(sol.u[k], sp.lambda2) : 0.0) + schedule.back();
  }
  const Field ru = degenerate_residual(sol.u, op, sp.p, delta, rhs_u, bc.first, ctx.exec);
  const Field rv = degenerate_residual(sol.v, op, sp.q, delta, rhs_v, bc.second, ctx.exec);
  double indep = 0.0;
  for (std::size_t k = 0; k < grid->size(); ++k) indep = std::max({indep, std::abs(ru[k]), std::abs(rv[k])});

  std::size_t dead = 0, dom = 0;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    if (grid->kind(k) == NodeKind::exterior) continue;
    ++dom;
    if (sol.u[k] <= fo.tol && sol.v[k] <= fo.tol) ++dead;
  }

  Report rep;
  rep.set("command", "solve-grid");
  rep.set("N", grid->N());
  rep.set("h", grid->h());
  rep.set("stages", sol.stages.size());
  rep.set("iterations", sol.stages.back().diagnostics.iterations);
  rep.set("residual", sol.stages.back().diagnostics.residual);
  rep.set("independent_residual", indep);
  rep.set("monotonicity_violation", sol.monotonicity_violation);
  rep.set("dead_core_fraction", static_cast<double>(dead) / static_cast<double>(dom));
  bool ok = true;
  try {
    const FreeBoundaryReport fb = analyze_free_boundary(sol.u, sol.v, sp, fo);
    const Report fb_rep = free_boundary_record(fb);
    for (const auto& [k, v] : fb_rep.entries()) {
      std::visit([&, key = k](const auto& x) { rep.set(key, x); }, v);
    }
    std::vector<double> lr, ls;
    for (const auto& [a, b] : fb.loglog) {
      lr.push_back(a);
      ls.push_back(b);
    }
    write_table_csv(path_in(ctx, "loglog.csv"), {"log_r", "log_S"}, {lr, ls});
    if (check_exp) ok = std::abs(fb.fitted_exponent / fb.expected_exponent - 1.0) <= exp_tol;
  } catch (const FitUnavailableError& e) {
    rep.set("fit", std::string("unavailable: ") + e.what());
    ok = !check_exp;
  }
  rep.set("pass", ok);
  emit(ctx, rep, "solve_grid");
  return ok ? 0 : 1;
}

int cmd_solve_henon(const Context& ctx) {
  const Config& c = ctx.cfg;
  const HenonParams hp = henon_from(c);
  const OperatorSpec op = operator_from(c, hp.ell_lo, hp.ell_hi);
  const GridPtr grid = grid_from(c);
  SolveConfig sc = solver_from(ctx);
  sc.epsilon = c.get_double("solver", "epsilon", 0.0);
  const bool critical = hp.mu == 1.0 + hp.p;
  const double C1 = critical ? 0.0 : henon_constant(hp);
  const double beta = critical ? 0.0 : henon_exponents(hp).beta_h;
  const double R = grid->radius();
  const double bc = parse_bc(c, "boundary", "value", critical ? 1.0 : C1 * std::pow(R, beta), C1 * std::pow(R, beta));
  const bool exact_check = c.get_bool("analysis", "exact_check", false);
  const double exact_tol = c.get_double("analysis", "exact_tol", 1e-3);
  HenonCheckOptions ho;
  ho.tol = c.get_double("analysis", "tol", ho.tol);
  ho.fit_slack = c.get_double("analysis", "fit_slack", ho.fit_slack);
  ho.r_max = c.get_double("analysis", "r_max", ho.r_max);
  c.check_consumed();

  const HenonSolution sol = solve_henon_grid(hp.p, op, {{1.0, hp.alpha, hp.mu}}, BoundaryTrace::constant(bc), sc, grid);
  write_fields(ctx, sol.u, "u");
  ho.residual = sol.diagnostics.residual;
  ho.solver_tol = sc.tol;
  const HenonReport hr = henon_checks(sol.u, hp, ho);

  Report rep;
  rep.set("command", "solve-henon");
  rep.set("N", grid->N());
  rep.set("h", grid->h());
  rep.set("iterations", sol.diagnostics.iterations);
  rep.set("residual", sol.diagnostics.residual);
  rep.set("boundary_value", bc);
  rep.set("min_u", hr.min_u);
  rep.set("critical_case", hr.critical_case);
  rep.set("positivity_pass", hr.positivity_pass);
  bool ok = hr.positivity_pass;
  if (!critical) {
    double err = 0.0;
    for (int j = 0; j < grid->N(); ++j)
      for (int i = 0; i < grid->N(); ++i)
        if (grid->in_domain(i, j))
          err = std::max(err, std::abs(sol.u(i, j) - C1 * std::pow(std::hypot(grid->x(i), grid->y(j)), beta)));
    rep.set("C1", C1);
    rep.set("beta_h", beta);
    rep.set("max_error_exact", err);
    rep.set("critical_points", hr.critical_points);
    rep.set("nondegeneracy_min_ratio", hr.nondegeneracy_min_ratio);
    rep.set("nondegeneracy_pass", hr.nondegeneracy_pass);
    rep.set("gradient_slope", hr.gradient_slope);
    rep.set("expected_gradient_slope", hr.expected_gradient_slope);
    if (exact_check) ok = ok && err <= exact_tol;
  }
  rep.set("pass", ok);
  emit(ctx, rep, "solve_henon");
  return ok ? 0 : 1;
}

int cmd_fit(const Context& ctx) {
  const Config& c = ctx.cfg;
  const SystemParams sp = system_from(c);
  const std::string pu = c.get_string("fit", "u", path_in(ctx, "u.bin"));
  const std::string pv = c.get_string("fit", "v", path_in(ctx, "v.bin"));
  FreeBoundaryOptions fo;
  fo.tol = c.get_double("analysis", "tol", fo.tol);
  fo.r_max = c.get_double("analysis", "r_max", fo.r_max);
  fo.porosity_r_max = c.get_double("analysis", "porosity_r_max", fo.porosity_r_max);
  c.check_consumed();
  const Field u = read_field(pu), v = read_field(pv);
  const FreeBoundaryReport fb = analyze_free_boundary(u, v, sp, fo);
  Report rep = free_boundary_record(fb);
  std::vector<double> lr, ls;
  for (const auto& [a, b] : fb.loglog) {
    lr.push_back(a);
    ls.push_back(b);
  }
  write_table_csv(path_in(ctx, "loglog.csv"), {"log_r", "log_S"}, {lr, ls});
  emit(ctx, rep, "fit");
  return 0;
}

int cmd_liouville(const Context& ctx) {
  const Config& c = ctx.cfg;
  const SystemParams sp = system_from(c);
  const std::string field = c.get_string("liouville", "field", "none");
  const double R = c.get_double("liouville", "R", 8.0);
  const int N = c.get_int("liouville", "N", 257);
  const double tol = c.get_double("liouville", "tol", 1e-12);
  const std::string pu = c.get_string("liouville", "u", "");
  const std::string pv = c.get_string("liouville", "v", "");
  c.check_consumed();
  const double m = liouville_threshold(sp);
  const ConstantPair cp = system_constants(sp, BarrierKind::super);
  const ExponentBundle e = system_exponents(sp);
  Report rep;
  rep.set("command", "liouville");
  rep.set("m", m);
  rep.set("A", cp.A);
  rep.set("B", cp.B);
  rep.set("alpha", e.alpha_u);
  rep.set("beta", e.beta_v);
  rep.set("kappa", e.kappa);
  if (field != "none") {
    Field u, v;
    if (field == "exact" || field == "zero") {
      const GridPtr g = Grid::disk(N, R);
      const auto [su, sv] = entire_pair(sp, BarrierKind::super);
      const double s = field == "exact" ? 1.0 : 0.0;
      u = Field::sample(g, [&](double x, double y) { return s * su.value_r(std::hypot(x, y)); });
      v = Field::sample(g, [&](double x, double y) { return s * sv.value_r(std::hypot(x, y)); });
    } else if (field == "files") {
      u = read_field(pu);
      v = read_field(pv);
    } else {
      throw ConfigError("[liouville] field must be none, exact, zero or files");
    }
    const LiouvilleReport lr = liouville_decay_check(pair_magnitude(u, v, sp), sp, m, tol);
    rep.set("field", field);
    rep.set("ratio", lr.ratio);
    rep.set("verdict", to_string(lr.verdict));
  }
  emit(ctx, rep, "liouville");
  return 0;
}

int cmd_blowup(const Context& ctx) {
  const Config& c = ctx.cfg;
  const SystemParams sp = system_from(c);
  const std::string source = c.get_string("blowup", "source", "exact_offset");
  const double rho = c.get_double("blowup", "rho", 0.3);
  const int N = c.get_int("blowup", "N", 1025);
  const std::vector<double> taus = c.get_list("blowup", "tau", {0.2, 0.1, 0.05});
  const double zx = c.get_double("blowup", "z0_x", source == "exact_offset" ? rho : 0.0);
  const double zy = c.get_double("blowup", "z0_y", 0.0);
  const double ball = c.get_double("blowup", "compare_radius", 0.5);
  const std::string pu = c.get_string("blowup", "u", "");
  const std::string pv = c.get_string("blowup", "v", "");
  c.check_consumed();

  const ExponentBundle e = system_exponents(sp);
  const auto [su, sv] = entire_pair(sp, BarrierKind::super);
  Field u, v;
  std::function<double(double, double)> ref_u, ref_v;
  const Point z0{zx, zy};
  if (source == "exact_centered" || source == "exact_offset") {
    const double off = source == "exact_offset" ? rho : 0.0;
    const GridPtr g = Grid::disk(N, 1.0);
    u = Field::sample(g, [&](double x, double y) { return su.coeff * std::pow(std::max(std::hypot(x, y) - off, 0.0), su.exponent); });
    v = Field::sample(g, [&](double x, double y) { return sv.coeff * std::pow(std::max(std::hypot(x, y) - off, 0.0), sv.exponent); });
    if (off == 0.0) {
      ref_u = [su = su](double x, double y) { return su.value_r(std::hypot(x, y)); };
      ref_v = [sv = sv](double x, double y) { return sv.value_r(std::hypot(x, y)); };
    } else {
      const double nz = std::hypot(zx, zy);
      if (!(nz > 0.0)) throw ConfigError("[blowup] offset source needs z0 on the free boundary");
      const double ex = zx / nz, ey = zy / nz;
      ref_u = [=, A = su.coeff, a = su.exponent](double x, double y) { return A * std::pow(std::max(x * ex + y * ey, 0.0), a); };
      ref_v = [=, B = sv.coeff, b = sv.exponent](double x, double y) { return B * std::pow(std::max(x * ex + y * ey, 0.0), b); };
    }
  } else if (source == "files") {
    u = read_field(pu);
    v = read_field(pv);
  } else {
    throw ConfigError("[blowup] source must be exact_centered, exact_offset or files");
  }
  Report rep;
  rep.set("command", "blowup");
  rep.set("source", source);
  rep.set("alpha", e.alpha_u);
  rep.set("beta", e.beta_v);
  std::vector<double> tcol, ecol;
  bool monotone = true;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const auto [ut, vt] = blowup_rescale(u, v, z0, taus[k], sp);
    write_field_binary(ut, path_in(ctx, "u_tau" + std::to_string(k) + ".bin"));
    write_field_binary(vt, path_in(ctx, "v_tau" + std::to_string(k) + ".bin"));
    if (ref_u) {
      const double err = std::max(sup_error_on_ball(ut, ref_u, ball), sup_error_on_ball(vt, ref_v, ball));
      if (!ecol.empty() && !(err < ecol.back())) monotone = false;
      tcol.push_back(taus[k]);
      ecol.push_back(err);
      rep.set("error_tau_" + std::to_string(k), err);
    }
  }
  if (!ecol.empty()) {
    write_table_csv(path_in(ctx, "blowup_errors.csv"), {"tau", "sup_error"}, {tcol, ecol});
    rep.set("monotone_decrease", monotone);
  }
  emit(ctx, rep, "blowup");
  return 0;
}

}  // namespace deadcore::cli
