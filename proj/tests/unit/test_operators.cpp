#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

#include "doctest.h"
#include "deadcore/errors.hpp"
#include "deadcore/exact.hpp"
#include "deadcore/kernels.hpp"
#include "deadcore/operators.hpp"
#include "deadcore/stencil.hpp"

using namespace deadcore;
using doctest::Approx;

namespace {

Sym2 random_sym(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  return {N(rng), N(rng), N(rng)};
}

Sym2 add(const Sym2& a, const Sym2& b) { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("hessian of quadratics is exact") {
    for (int N : {9, 33, 65}) {
      const GridPtr g = Grid::box(N, 1.0 / (N - 1), 0.1, -0.3);
      const Field q = Field::sample(g, [](double x, double y) { return x * x + y * y + 0.3 * x - y; });
      const Field m = Field::sample(g, [](double x, double y) { return x * y; });
      const int c = N / 2;
      const Sym2 H = hessian(q, c, c), M = hessian(m, c, c);
      CHECK(H.xx == Approx(2).epsilon(1e-9));
      CHECK(H.yy == Approx(2).epsilon(1e-9));
      CHECK(std::abs(H.xy) < 1e-9);
      CHECK(std::abs(M.xx) < 1e-9);
      CHECK(std::abs(M.yy) < 1e-9);
      CHECK(M.xy == Approx(1).epsilon(1e-9));
    }
  }

  TEST_CASE("hessian truncation bound on x^4") {
    for (int N : {11, 21, 41}) {
      const double h = 1.0 / (N - 1);
      const GridPtr g = Grid::box(N, h, 0.0, 0.0);
      const Field f = Field::sample(g, [](double x, double) { return std::pow(x, 4); });
      const Sym2 H = hessian(f, (N - 1) / 2, 3);
      CHECK(std::abs(H.xx - 3.0) <= 2 * h * h * (1 + 1e-6));
    }
  }

  TEST_CASE("hessian needs a full neighbourhood") {
    const GridPtr g = Grid::box(9, 0.125, 0, 0);
    const Field f(g, 1.0);
    CHECK_THROWS_AS(hessian(f, 0, 4), StencilError);
    CHECK_THROWS_AS(gradient(f, 4, 8), StencilError);
    CHECK_NOTHROW(hessian(f, 1, 1));
  }

  TEST_CASE("operator values on diagonal matrices") {
    const Sym2 d{1, 0, -1};
    CHECK(apply_operator(OperatorSpec::pucci_plus(1, 2), d, 0, 0) == Approx(1));
    CHECK(apply_operator(OperatorSpec::pucci_minus(1, 2), d, 0, 0) == Approx(-1));
    CHECK(apply_operator(OperatorSpec::trace_identity(), Sym2{3, 0, 5}, 0, 0) == Approx(8));
    const auto var = OperatorSpec::trace_with([](double x, double) { return Sym2{1 + x, 0.1, 1}; }, 0.5, 2.5);
    CHECK(apply_operator(var, Sym2{1, 2, 3}, 0.5, 0) == Approx(1.5 * 1 + 2 * 0.1 * 2 + 3));
  }

  TEST_CASE("operator specs are validated") {
    CHECK_THROWS_AS(OperatorSpec::pucci_plus(2, 1).validate(), ParameterError);
    CHECK_THROWS_AS(OperatorSpec::pucci_minus(0, 1).validate(), ParameterError);
    CHECK_THROWS_AS(OperatorSpec::trace_identity(-1).validate(), ParameterError);
  }

  TEST_CASE("ellipticity properties on random matrices") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    const auto plus = OperatorSpec::pucci_plus(0.5, 2), minus = OperatorSpec::pucci_minus(0.5, 2);
    const auto tr = OperatorSpec::trace_with([](double x, double y) { return Sym2{1.0 + 0.5 * x, 0.2 * y, 1.2}; }, 0.5, 2);
    for (int k = 0; k < 1000; ++k) {
      const Sym2 M = random_sym(rng);
      const double t = U(rng);
      CHECK(apply_operator(plus, M, 0, 0) >= apply_operator(minus, M, 0, 0) - 1e-14);
      CHECK(apply_operator(plus, Sym2{t * M.xx, t * M.xy, t * M.yy}, 0, 0) ==
            Approx(t * apply_operator(plus, M, 0, 0)).epsilon(1e-12).scale(1));
      CHECK(apply_operator(minus, Sym2{t * M.xx, t * M.xy, t * M.yy}, 0, 0) ==
            Approx(t * apply_operator(minus, M, 0, 0)).epsilon(1e-12).scale(1));
      // P >= 0 as a random Gram matrix.
      const double a = U(rng) - 1.5, b = U(rng) - 1.5, c = U(rng) - 1.5;
      const Sym2 P{a * a + c * c, a * b, b * b};
      const Sym2 Nm = add(M, P);
      CHECK(apply_operator(minus, P, 0, 0) >= -1e-14);
      for (const auto& op : {plus, minus, tr})
        CHECK(apply_operator(op, Nm, 0.3, -0.2) >= apply_operator(op, M, 0.3, -0.2) - 1e-12);
      for (const auto& op : {plus, minus}) {
        const Sym2 C = effective_coefficients(op, M, 0, 0);
        CHECK(C.xx * M.xx + 2 * C.xy * M.xy + C.yy * M.yy == Approx(apply_operator(op, M, 0, 0)).epsilon(1e-12).scale(1));
        const auto ev = C.eigenvalues();
        CHECK(ev[0] >= 0.5 - 1e-12);
        CHECK(ev[1] <= 2 + 1e-12);
      }
    }
    // Strict gap away from the equal-ellipticity case.
    CHECK(apply_operator(plus, Sym2{1, 0, -1}, 0, 0) > apply_operator(minus, Sym2{1, 0, -1}, 0, 0));
    CHECK(apply_operator(OperatorSpec::pucci_plus(1, 1), Sym2{1, 0.4, -1}, 0, 0) ==
          Approx(apply_operator(OperatorSpec::pucci_minus(1, 1), Sym2{1, 0.4, -1}, 0, 0)));
  }

  TEST_CASE("degenerate residual basics") {
    const GridPtr g = Grid::disk(33);
    const Field c(g, 2.5), zero(g, 0.0);
    const Field r = degenerate_residual(c, OperatorSpec::pucci_plus(1, 2), 1.0, 0.0, zero);
    for (double x : r.values()) CHECK(x == 0.0);
    // p = 0 drops the gradient factor whatever delta is.
    const Field q = Field::sample(g, [](double x, double y) { return std::sin(x) * y * y; });
    const auto spec = OperatorSpec::pucci_minus(0.5, 1.5);
    const Field a = degenerate_residual(q, spec, 0.0, 0.0, zero), b = degenerate_residual(q, spec, 0.0, 0.3, zero);
    for (std::size_t k = 0; k < g->size(); ++k) CHECK(a[k] == b[k]);
    for (int j = 1; j + 1 < g->N(); ++j)
      for (int i = 1; i + 1 < g->N(); ++i) {
        bool full = true;
        for (int b = -1; b <= 1; ++b)
          for (int c = -1; c <= 1; ++c) full = full && g->in_domain(i + c, j + b);
        if (g->interior(i, j) && full)
          CHECK(a(i, j) == Approx(apply_operator(spec, hessian(q, i, j), g->x(i), g->y(j))));
        else if (!g->interior(i, j))
          CHECK(a(i, j) == 0.0);
      }
    const Field other(Grid::disk(17), 0.0);
    CHECK_THROWS_AS(degenerate_residual(q, spec, 0.0, 0.0, other), ShapeError);
  }

  TEST_CASE("degenerate residual is second-order consistent on the quartic pair") {
    const SystemParams s{0, 0, 0.5, 0.5, 1, 1, 2};
    const auto [su, sv] = entire_pair(s, BarrierKind::super);
    double prev = 0.0;
    for (int N : {129, 257, 513}) {
      const GridPtr g = Grid::disk(N);
      const Field u = Field::sample(g, [&](double x, double y) { return su.value_r(std::hypot(x, y)); });
      const Field rhs = Field::sample(g, [&](double x, double y) { return std::sqrt(sv.value_r(std::hypot(x, y))); });
      const Field r = degenerate_residual(u, OperatorSpec::trace_identity(), 0.0, 0.0, rhs);
      double e = 0.0;
      for (double x : r.values()) e = std::max(e, std::abs(x));
      if (prev > 0.0) CHECK(std::log2(prev / e) >= 1.9);
      prev = e;
    }
  }

  TEST_CASE("boundary-fitted stencils reproduce quadratics on the disk") {
    const auto quad = [](double x, double y) { return 0.7 * x * x - 0.2 * x * y + 1.3 * y * y + x - 2 * y + 0.4; };
    const BoundaryTrace bc{quad};
    for (int N : {17, 33, 64}) {
      const GridPtr g = Grid::disk(N);
      const StencilSet st(g, StencilMode::boundary_fitted, &bc);
      std::vector<double> u(g->size(), 1e6);
      for (std::size_t id = 0; id < st.size(); ++id) u[st.node(id)] = quad(st.x(id), st.y(id));
      st.fill_boundary(u, bc);
      for (std::size_t id = 0; id < st.size(); ++id) {
        const LocalDerivs d = st.eval(id, u.data());
        const double x = st.x(id), y = st.y(id);
        CHECK(d.ux == Approx(1.4 * x - 0.2 * y + 1).epsilon(1e-7).scale(1));
        CHECK(d.uy == Approx(-0.2 * x + 2.6 * y - 2).epsilon(1e-7).scale(1));
        CHECK(d.H.xx == Approx(1.4).epsilon(1e-6).scale(1));
        CHECK(d.H.yy == Approx(2.6).epsilon(1e-6).scale(1));
        CHECK(d.H.xy == Approx(-0.2).epsilon(1e-6).scale(1));
      }
    }
  }

  TEST_CASE("boundary points are radial projections") {
    const GridPtr g = Grid::disk(21);
    for (int j = 0; j < g->N(); ++j)
      for (int i = 0; i < g->N(); ++i) {
        if (g->interior(i, j)) continue;
        const auto b = boundary_point(*g, i, j);
        if (g->x(i) == 0.0 && g->y(j) == 0.0) continue;
        CHECK(std::hypot(b[0], b[1]) == Approx(1.0));
      }
    const GridPtr box = Grid::box(9, 0.1, 0, 0);
    const auto b = boundary_point(*box, 0, 3);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == Approx(0.3));
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("serial and OpenMP kernels agree bit for bit") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const GridPtr g = Grid::disk(129);
    const BoundaryTrace bc = BoundaryTrace::constant(0.5);
    const StencilSet st(g, StencilMode::boundary_fitted, &bc);
    std::vector<double> u(g->size());
    for (double& x : u) x = U(rng);
    st.fill_boundary(u, bc);
    for (const auto& spec : {OperatorSpec::pucci_plus(0.5, 2), OperatorSpec::pucci_minus(0.5, 2),
                             OperatorSpec::trace_with([](double x, double y) { return Sym2{1 + 0.3 * x, 0.1 * y, 1}; }, 0.5, 2)})
      for (double p : {-0.5, 0.0, 1.0, 1.7}) {
        std::vector<double> a(st.size()), b(st.size());
        std::vector<JacRow> ja(st.size()), jb(st.size());
        kernels::degenerate_operator_serial(st, spec, p, 0.05, u.data(), a.data(), ja.data());
        kernels::degenerate_operator_omp(st, spec, p, 0.05, u.data(), b.data(), jb.data());
        bool same = true;
        for (std::size_t k = 0; k < st.size(); ++k) {
          same = same && std::bit_cast<std::uint64_t>(a[k]) == std::bit_cast<std::uint64_t>(b[k]);
          for (int s = 0; s < LocalStencil::kSlots; ++s)
            same = same && std::bit_cast<std::uint64_t>(ja[k][s]) == std::bit_cast<std::uint64_t>(jb[k][s]);
        }
        CHECK(same);
      }
  }

  TEST_CASE("kernel jacobian matches finite differences") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const GridPtr g = Grid::disk(33);
    const BoundaryTrace bc = BoundaryTrace::constant(0.0);
    const StencilSet st(g, StencilMode::boundary_fitted, &bc);
    std::vector<double> u(g->size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = U(rng);
    st.fill_boundary(u, bc);
    // Trace kind keeps the law smooth; Pucci kinds are smooth away from eigenvalue sign changes.
    for (const auto& spec : {OperatorSpec::trace_identity(1.5), OperatorSpec::pucci_plus(0.5, 2)}) {
      std::vector<double> val(st.size());
      std::vector<JacRow> jac(st.size());
      degenerate_operator(st, spec, 1.3, 0.1, u.data(), val.data(), jac.data(), Exec::sequential);
      for (std::size_t id = 0; id < st.size(); id += 7) {
        const LocalStencil& ls = st.at(id);
        for (int s = 0; s < LocalStencil::kSlots; ++s) {
          if (ls.node[s] < 0 || g->kind(static_cast<std::size_t>(ls.node[s])) != NodeKind::interior) continue;
          const double step = 1e-6;
          std::vector<double> up = u, um = u;
          up[ls.node[s]] += step;
          um[ls.node[s]] -= step;
          std::vector<double> vp(st.size()), vm(st.size());
          kernels::degenerate_operator_node(st, spec, 1.3, 0.1, up.data(), id, vp.data(), nullptr);
          kernels::degenerate_operator_node(st, spec, 1.3, 0.1, um.data(), id, vm.data(), nullptr);
          CHECK(jac[id][s] == Approx((vp[id] - vm[id]) / (2 * step)).epsilon(1e-5).scale(1e3));
        }
      }
    }
  }
}
