#include <cmath>

#include "doctest.h"
#include "deadcore/errors.hpp"
#include "deadcore/exact.hpp"
#include "deadcore/gridsolver.hpp"
#include "deadcore/operators.hpp"

using namespace deadcore;
using doctest::Approx;

namespace {

const OperatorSpec kId = OperatorSpec::trace_identity();
const SpecPair kIds{kId, kId};
const TracePair kZero{BoundaryTrace::constant(0.0), BoundaryTrace::constant(0.0)};

double sup_diff(const Field& f, const std::function<double(double, double)>& g) {
  const Grid& gr = f.grid();
  double e = 0.0;
  for (int j = 0; j < gr.N(); ++j)
    for (int i = 0; i < gr.N(); ++i)
      if (gr.in_domain(i, j)) e = std::max(e, std::abs(f(i, j) - g(gr.x(i), gr.y(j))));
  return e;
}

double sup_abs(const Field& f) {
  double e = 0.0;
  for (std::size_t k = 0; k < f.values().size(); ++k)
    if (f.grid().kind(k) != NodeKind::exterior) e = std::max(e, std::abs(f[k]));
  return e;
}

}  // namespace

TEST_SUITE("gridsolver") {
  TEST_CASE("zero data without penalization is a fixed point") {
    SolveConfig cfg;
    const auto sol = solve_penalized(SystemParams{0, 0, 0.5, 0.5, 1, 1, 2}, kIds, kZero, cfg, Grid::disk(65));
    for (std::size_t k = 0; k < sol.u.values().size(); ++k) {
      CHECK(sol.u[k] == 0.0);
      CHECK(sol.v[k] == 0.0);
    }
    const auto h = solve_henon_grid(1.0, kId, {{0.0, 1.0, 0.5}}, BoundaryTrace::constant(0.0), cfg, Grid::disk(65));
    CHECK(sup_abs(h.u) == 0.0);
  }

  TEST_CASE("Poisson problem") {
    SolveConfig cfg;
    cfg.epsilon = 1.0;
    const GridPtr g = Grid::disk(129);
    const auto sol = solve_penalized(SystemParams{0, 0, 0, 0, 1, 1, 2}, kIds, kZero, cfg, g);
    const auto exact = [](double x, double y) { return (x * x + y * y - 1) / 4; };
    CHECK(sup_diff(sol.u, exact) <= 5 * g->h() * g->h());
    CHECK(sup_diff(sol.v, exact) <= 5 * g->h() * g->h());
    // Independent residual check with the operator module.
    const Field rhs(g, 1.0);
    const Field r = degenerate_residual(sol.u, kId, 0.0, g->h(), rhs, BoundaryTrace::constant(0.0));
    CHECK(sup_abs(r) <= cfg.tol);
    CHECK(apriori_bound_check(sol.u, 0.0, 1.0, 0.0, 1.0) == Approx(0.75).epsilon(1e-6));
  }

  TEST_CASE("residual of converged solves re-evaluated independently") {
    SolveConfig cfg;
    cfg.epsilon = 0.1;
    const SystemParams s{1, 0.5, 0.5, 0.7, 1, 1, 2};
    const GridPtr g = Grid::disk(65);
    const auto specs = SpecPair{OperatorSpec::pucci_plus(0.5, 1.5), OperatorSpec::pucci_minus(0.5, 1.5)};
    const TracePair bc{BoundaryTrace::constant(1.0), BoundaryTrace{[](double x, double) { return 1.0 + 0.5 * x; }}};
    const auto sol = solve_penalized(s, specs, bc, cfg, g);
    Field ru(g), rv(g);
    for (std::size_t k = 0; k < g->size(); ++k) {
      ru[k] = std::pow(std::max(sol.v[k], 0.0), s.lambda1) + cfg.epsilon;
      rv[k] = std::pow(std::max(sol.u[k], 0.0), s.lambda2) + cfg.epsilon;
    }
    CHECK(sup_abs(degenerate_residual(sol.u, specs.first, s.p, g->h(), ru, bc.first)) <= cfg.tol);
    CHECK(sup_abs(degenerate_residual(sol.v, specs.second, s.q, g->h(), rv, bc.second)) <= cfg.tol);
    CHECK(sol.diagnostics.residual <= cfg.tol);
    CHECK_FALSE(sol.diagnostics.residual_history.empty());
  }

  TEST_CASE("penalization monotonicity along a schedule") {
    SolveConfig cfg;
    const SystemParams s{0, 0, 0.5, 0.5, 1.0 / 36, 1.0 / 36, 2};
    const auto op = OperatorSpec::trace_identity(1.0 / 36);
    const TracePair one{BoundaryTrace::constant(1.0), BoundaryTrace::constant(1.0)};
    const auto sol = solve_deadcore(s, {op, op}, one, cfg, Grid::disk(129), {1.0, 0.5, 0.1, 0.01, 0.0});
    REQUIRE(sol.stages.size() == 5);
    for (std::size_t i = 0; i + 2 < sol.stages.size(); ++i) {
      CHECK(check_comparison(sol.stages[i].u, sol.stages[i + 1].u, cfg.tol));
      CHECK(check_comparison(sol.stages[i].v, sol.stages[i + 1].v, cfg.tol));
    }
    CHECK(sol.monotonicity_violation <= cfg.tol);
    // Dead core of positive area at the end of the schedule.
    std::size_t dead = 0, dom = 0;
    for (std::size_t k = 0; k < sol.u.values().size(); ++k) {
      if (sol.u.grid().kind(k) == NodeKind::exterior) continue;
      ++dom;
      dead += sol.u[k] <= 1e-7 && sol.v[k] <= 1e-7;
      CHECK(sol.u[k] >= 0.0);
    }
    CHECK(static_cast<double>(dead) / dom >= 0.01);
  }

  TEST_CASE("single-entry schedule equals the direct solve") {
    SolveConfig cfg;
    const SystemParams s{0, 0, 0.5, 0.5, 1, 1, 2};
    const TracePair bc{BoundaryTrace::constant(0.3), BoundaryTrace::constant(0.2)};
    const GridPtr g = Grid::disk(65);
    const auto a = solve_deadcore(s, kIds, bc, cfg, g, {0.0});
    const auto b = solve_penalized(s, kIds, bc, cfg, g);
    CHECK(check_comparison(a.u, b.u, cfg.tol));
    CHECK(check_comparison(b.u, a.u, cfg.tol));
    CHECK(check_comparison(a.v, b.v, cfg.tol));
    CHECK(check_comparison(b.v, a.v, cfg.tol));
  }

  TEST_CASE("comparison in the boundary data") {
    SolveConfig cfg;
    const SystemParams s{0, 0, 0.5, 0.5, 0.25, 0.25, 2};
    const auto op = OperatorSpec::trace_identity(0.25);
    const GridPtr g = Grid::disk(65);
    const auto lo = solve_penalized(s, {op, op}, {BoundaryTrace::constant(0.5), BoundaryTrace::constant(0.5)}, cfg, g);
    const auto hi = solve_penalized(s, {op, op}, {BoundaryTrace::constant(1.0), BoundaryTrace::constant(1.0)}, cfg, g);
    CHECK(check_comparison(lo.u, hi.u, cfg.tol));
    CHECK(check_comparison(lo.v, hi.v, cfg.tol));
  }

  TEST_CASE("henon grid reproduces the radial scenario") {
    const HenonParams hp{0, 0, 1, 1, 1, 2};
    const double C1 = henon_constant(hp);
    double prev = 0.0;
    for (int N : {33, 65, 129}) {
      SolveConfig cfg;
      cfg.tol = 1e-11;
      const GridPtr g = Grid::disk(N);
      const auto sol = solve_henon_grid(0.0, kId, {{1.0, 1.0, 0.0}}, BoundaryTrace::constant(C1), cfg, g);
      const double e = sup_diff(sol.u, [&](double x, double y) { return C1 * std::pow(std::hypot(x, y), 3); });
      if (prev > 0.0) CHECK(prev / e >= 3.0);
      prev = e;
    }
  }

  TEST_CASE("two-term henon solution between single-term ones") {
    SolveConfig cfg;
    const GridPtr g = Grid::disk(65);
    const BoundaryTrace one = BoundaryTrace::constant(1.0);
    const auto two = solve_henon_grid(0.0, kId, {{1.0, 1.0, 0.5}, {1.0, 2.0, 1.0}}, one, cfg, g);
    const auto big = solve_henon_grid(0.0, kId, {{2.0, 1.0, 0.5}}, one, cfg, g);
    const auto small = solve_henon_grid(0.0, kId, {{2.0, 2.0, 1.0}}, one, cfg, g);
    CHECK(check_comparison(big.u, two.u, cfg.tol));
    CHECK(check_comparison(two.u, small.u, cfg.tol));
    CHECK(two.u.max_in_domain() <= 1.0 + cfg.tol);
  }

  TEST_CASE("critical absorption order keeps positivity") {
    SolveConfig cfg;
    const auto sol = solve_henon_grid(0.0, kId, {{1.0, 1.0, 1.0}}, BoundaryTrace::constant(1.0), cfg, Grid::disk(65));
    CHECK(sol.u.min_in_domain() > 0.0);
  }

  TEST_CASE("comparison helper") {
    const GridPtr g = Grid::disk(33);
    const Field a = Field::sample(g, [](double x, double) { return x; });
    CHECK(check_comparison(a, a, 0.0));
    const SystemParams s{0, 0, 0.5, 0.5, 0.5, 2, 2};
    const auto sub = system_constants(s, BarrierKind::sub), sup = system_constants(s, BarrierKind::super);
    const auto e = system_exponents(s);
    const Field fs = Field::sample(g, [&](double x, double y) { return sup.A * std::pow(std::hypot(x, y), e.alpha_u); });
    const Field fb = Field::sample(g, [&](double x, double y) { return sub.A * std::pow(std::hypot(x, y), e.alpha_u); });
    CHECK(check_comparison(fs, fb, 0.0));
    CHECK_FALSE(check_comparison(fb, fs, 0.0));
    CHECK_THROWS_AS(check_comparison(a, Field(Grid::disk(17)), 0.0), ShapeError);
  }

  TEST_CASE("solved field under an offset supersolution") {
    SolveConfig cfg;
    const SystemParams s{0, 0, 0.5, 0.5, 1.0 / 36, 1.0 / 36, 2};
    const auto op = OperatorSpec::trace_identity(1.0 / 36);
    const GridPtr g = Grid::disk(129);
    const auto sol = solve_deadcore(s, {op, op}, {BoundaryTrace::constant(1.0), BoundaryTrace::constant(1.0)}, cfg, g,
                                    {1.0, 0.1, 0.01, 0.0});
    // A (r - rho)^4 with unit value at r = 1 dominates the data; it is a supersolution because
    // the offset only lowers the (n-1)/r term against the entire pair.
    const double A = system_constants(s, BarrierKind::super).A, rho = 1 - std::pow(A, -0.25);
    const Field bar = Field::sample(g, [&](double x, double y) { return A * std::pow(std::max(std::hypot(x, y) - rho, 0.0), 4); });
    CHECK(check_comparison(sol.u, bar, 1e-3));
    CHECK(check_comparison(sol.v, bar, 1e-3));
  }

  TEST_CASE("a-priori bound") {
    const GridPtr g = Grid::disk(33);
    const Field z(g, 0.0);
    CHECK(apriori_bound_check(z, 0.5, 2.0, 1.0, 2.0) == Approx(0.5 + 4 * std::sqrt(2.0)));
    const double b1 = apriori_bound_check(z, 0.0, 1.0, 1.0, 1.0), b2 = apriori_bound_check(z, 0.0, 2.0, 1.0, 1.0);
    CHECK(b2 / b1 == Approx(std::pow(2.0, 0.5)));
    CHECK(apriori_bound_check(z, 0.0, 1.0, 0.0, 1.0, 3.0) == Approx(3.0));
  }

  TEST_CASE("configuration and data checks") {
    const SystemParams s{0, 0, 0.5, 0.5, 1, 1, 2};
    const GridPtr g = Grid::disk(33);
    SolveConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve_penalized(s, kIds, kZero, bad, g), ParameterError);
    bad = SolveConfig{};
    bad.damping = 1.5;
    CHECK_THROWS_AS(solve_penalized(s, kIds, kZero, bad, g), ParameterError);
    bad = SolveConfig{};
    bad.epsilon = -1;
    CHECK_THROWS_AS(solve_penalized(s, kIds, kZero, bad, g), ParameterError);
    const SolveConfig cfg;
    CHECK_THROWS_AS(solve_deadcore(s, kIds, kZero, cfg, g, {0.1, 0.5}), ArgumentError);
    CHECK_THROWS_AS(solve_deadcore(s, kIds, kZero, cfg, g, {1.0, -1.0}), ArgumentError);
    CHECK_THROWS_AS(solve_deadcore(s, kIds, kZero, cfg, g, {}), ArgumentError);
    CHECK_THROWS_AS(solve_penalized(s, kIds, {BoundaryTrace::constant(-1.0), BoundaryTrace::constant(0.0)}, cfg, g),
                    ArgumentError);
    SolveConfig tiny;
    tiny.delta = 1e-6;
    CHECK_THROWS_AS(solve_penalized(SystemParams{-0.5, 0, 0.2, 0.2, 1, 1, 2}, kIds, kZero, tiny, g), ParameterError);
    CHECK_THROWS_AS(solve_henon_grid(0.0, kId, {{-1.0, 1.0, 0.5}}, kZero.first, cfg, g), ParameterError);
    CHECK_THROWS_AS(solve_henon_grid(0.0, kId, {{1.0, 1.0, 1.5}}, kZero.first, cfg, g), ParameterError);
    CHECK_THROWS_AS(solve_penalized(SystemParams{0, 0, 1, 1, 1, 1, 2}, kIds, kZero, cfg, g), ParameterError);
  }

  TEST_CASE("parallel execution reproduces the sequential solve") {
    SolveConfig a, b;
    a.epsilon = b.epsilon = 0.5;
    b.exec = Exec::parallel;
    const SystemParams s{1, 1, 0.5, 0.5, 1, 1, 2};
    const TracePair bc{BoundaryTrace::constant(1.0), BoundaryTrace::constant(0.5)};
    const auto sa = solve_penalized(s, kIds, bc, a, Grid::disk(65));
    const auto sb = solve_penalized(s, kIds, bc, b, Grid::disk(65));
    CHECK(sa.u.values() == sb.u.values());
    CHECK(sa.v.values() == sb.v.values());
  }
}
