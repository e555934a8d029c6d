#include <cmath>
#include <random>

#include "doctest.h"
#include "deadcore/errors.hpp"
#include "deadcore/exact.hpp"

using namespace deadcore;
using doctest::Approx;

namespace {

// Radial Laplacian of c r^g in dimension n from hand derivatives.
double radial_laplacian(double c, double g, int n, double r) {
  return c * g * (g - 1) * std::pow(r, g - 2) + (n - 1) * c * g * std::pow(r, g - 2);
}

}  // namespace

TEST_SUITE("exact") {
  TEST_CASE("system constants on named cases") {
    const auto c0 = system_constants(SystemParams{0, 0, 0, 0, 1, 1, 2}, BarrierKind::super);
    CHECK(c0.A == Approx(0.25).epsilon(1e-14));
    CHECK(c0.B == Approx(0.25).epsilon(1e-14));
    CHECK(radial_laplacian(0.25, 2, 2, 0.7) == Approx(1.0).epsilon(1e-14));

    const auto c1 = system_constants(SystemParams{0, 0, 0.5, 0.5, 1, 1, 1}, BarrierKind::super);
    CHECK(c1.A == Approx(1.0 / 144).epsilon(1e-14));
    CHECK(c1.B == Approx(1.0 / 144).epsilon(1e-14));
    for (double r : {0.1, 0.5, 1.0})
      CHECK(radial_laplacian(1.0 / 144, 4, 1, r) == Approx(std::sqrt(std::pow(r, 4) / 144)).epsilon(1e-14));
  }

  TEST_CASE("defining relations hold for random tuples") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 200; ++k) {
      SystemParams s = random_system_params(rng, 1 + k % 3);
      s.ell_lo = 0.5;
      s.ell_hi = 2.0;
      const auto e = system_exponents(s);
      for (auto kind : {BarrierKind::super, BarrierKind::sub}) {
        const double L = kind == BarrierKind::super ? s.ell_hi : s.ell_lo;
        const auto c = system_constants(s, kind);
        CHECK(L * (s.n + e.alpha_u - 2) * std::pow(c.A * e.alpha_u, 1 + s.p) == Approx(std::pow(c.B, s.lambda1)).epsilon(1e-12));
        CHECK(L * (s.n + e.beta_v - 2) * std::pow(c.B * e.beta_v, 1 + s.q) == Approx(std::pow(c.A, s.lambda2)).epsilon(1e-12));
      }
      // A smaller ellipticity gives larger constants.
      const auto sup = system_constants(s, BarrierKind::super), sub = system_constants(s, BarrierKind::sub);
      CHECK(sub.A >= sup.A);
      CHECK(sub.B >= sup.B);
    }
  }

  TEST_CASE("henon constant") {
    CHECK(henon_constant(HenonParams{0, 0, 0, 1, 1, 1}) == Approx(0.5).epsilon(1e-15));
    CHECK(henon_constant(HenonParams{0, 0, 1, 1, 1, 2}) == Approx(1.0 / 9).epsilon(1e-15));
    CHECK(radial_laplacian(1.0 / 9, 3, 2, 0.3) == Approx(0.3).epsilon(1e-14));
    CHECK(henon_constant(HenonParams{0, 0.5, 0, 1, 1, 1}) == Approx(1.0 / 144).epsilon(1e-15));
    std::mt19937_64 rng(22);
    for (int k = 0; k < 100; ++k) {
      HenonParams h = random_henon_params(rng, 1 + k % 3);
      h.ell_lo = h.ell_hi = 0.25 + 2 * std::uniform_real_distribution<double>()(rng);
      const double C = henon_constant(h), b = henon_exponents(h).beta_h;
      CHECK(std::pow(C, 1 + h.p - h.mu) * std::pow(b, 1 + h.p) * (h.n + b - 2) * h.ell_hi == Approx(1).epsilon(1e-12));
      for (double r : {0.2, 0.9}) {
        const double rhs = std::pow(r, h.alpha) * std::pow(C * std::pow(r, b), h.mu);
        CHECK(std::abs(henon_residual_radial(RadialSolution{C, b, {}, 0}, h, r)) <= 1e-12 * std::max(1.0, rhs));
      }
    }
  }

  TEST_CASE("coordinate solutions") {
    auto u = coordinate_solution(HenonParams{0, 0, 0, 1, 1, 1}, 1);
    CHECK(u.coeff == Approx(0.5).epsilon(1e-15));
    CHECK(u.exponent == Approx(2).epsilon(1e-15));
    u = coordinate_solution(HenonParams{0, 0, 1, 1, 1, 1}, 1);
    CHECK(u.coeff == Approx(1.0 / 6).epsilon(1e-15));
    CHECK(u.d2(-0.4) == Approx(0.4).epsilon(1e-14));

    const HenonParams sq{0, 0.5, 0, 1, 1, 1};
    const auto good = coordinate_solution(sq, 1);
    const auto literal = coordinate_solution(sq, 1, CoefficientForm::paper_literal);
    CHECK(good.coeff == Approx(1.0 / 144).epsilon(1e-15));
    CHECK(literal.coeff == Approx(1.0 / 12).epsilon(1e-15));
    CHECK(std::abs(coordinate_residual(good, sq, 0.5)) < 1e-14);
    CHECK(std::abs(coordinate_residual(literal, sq, 0.5)) > 1e-3);

    std::mt19937_64 rng(23);
    for (int k = 0; k < 50; ++k) {
      HenonParams h = random_henon_params(rng, 1 + k % 3);
      const auto prof = coordinate_solution(h, 1);
      for (double t : {-0.8, 0.1, 0.6}) {
        const double lhs = std::pow(std::abs(prof.d1(t)), h.p) * prof.d2(t);
        CHECK(std::abs(coordinate_residual(prof, h, t)) <= 1e-10 * std::max(1.0, std::abs(lhs)));
      }
    }
    CHECK_THROWS_AS(coordinate_solution(HenonParams{0, 0, 1, 1, 1, 2}, 3), ArgumentError);
  }

  TEST_CASE("radial residuals") {
    const SystemParams s{0, 0, 0.5, 0.5, 1, 1, 1};
    const RadialSolution u{1.0 / 144, 4, {}, 0}, v{1.0 / 144, 4, {}, 0};
    for (double r : {0.01, 0.3, 1.0}) {
      const auto [a, b] = residual_radial(u, v, s, RadialOperator::trace_identity, r);
      CHECK(std::abs(a) < 1e-12);
      CHECK(std::abs(b) < 1e-12);
    }
    const RadialSolution off{1.0 / 144, 4, {}, 0.3};
    CHECK_THROWS_AS(residual_radial(off, v, s, RadialOperator::trace_identity, 0.3), DeadCoreEvaluationError);
    CHECK_THROWS_AS(residual_radial(off, v, s, RadialOperator::trace_identity, 0.1), DeadCoreEvaluationError);
  }

  TEST_CASE("barrier signs under Pucci operators") {
    std::mt19937_64 rng(24);
    for (int k = 0; k < 50; ++k) {
      SystemParams s = random_system_params(rng, 1 + k % 3);
      s.ell_lo = 0.5;
      s.ell_hi = 1.5;
      const auto [su, sv] = entire_pair(s, BarrierKind::super);
      const auto [bu, bv] = entire_pair(s, BarrierKind::sub);
      for (int j = 1; j <= 20; ++j) {
        const double r = 0.05 * j;
        const auto sp = relative_residual_radial(su, sv, s, RadialOperator::pucci_plus, r);
        CHECK(sp.first <= 1e-12);
        CHECK(sp.second <= 1e-12);
        const auto sm = relative_residual_radial(bu, bv, s, RadialOperator::pucci_minus, r);
        CHECK(sm.first >= -1e-12);
        CHECK(sm.second >= -1e-12);
      }
    }
  }

  TEST_CASE("random exact residuals with unit ellipticity") {
    std::mt19937_64 rng(25);
    for (int k = 0; k < 20; ++k) {
      const SystemParams s = random_system_params(rng, 1 + k % 3);
      const auto [u, v] = entire_pair(s, BarrierKind::super);
      for (int j = 0; j <= 50; ++j) {
        const double r = 0.05 + 0.95 * j / 50;
        const auto [a, b] = relative_residual_radial(u, v, s, RadialOperator::trace_identity, r);
        CHECK(std::abs(a) <= 1e-10);
        CHECK(std::abs(b) <= 1e-10);
      }
    }
  }

  TEST_CASE("liouville threshold") {
    CHECK(liouville_threshold(SystemParams{0, 0, 0, 0, 1, 1, 2}) == Approx(0.25).epsilon(1e-14));
    CHECK(liouville_threshold(SystemParams{0, 0, 0.5, 0.5, 1, 1, 1}) == Approx(std::pow(144.0, -2.0 / 3.0)).epsilon(1e-14));
    const SystemParams sym{1, 1, 0.7, 0.7, 1, 1, 2};
    const auto c = system_constants(sym, BarrierKind::super);
    CHECK(liouville_threshold(sym) == Approx(std::pow(c.A, 2 / sym.num_alpha())).epsilon(1e-14));
    CHECK_THROWS_AS(liouville_threshold(SystemParams{0, -0.5, 0, 0, 1, 1, 2}), ParameterError);
  }

  TEST_CASE("radial solution values") {
    const RadialSolution s{2.0, 3.0, {1.0, 0.0}, 0.5};
    CHECK(s.value({1.0, 0.0}) == 0.0);
    CHECK(s.value({2.5, 0.0}) == Approx(2.0));
    CHECK(s.value({1.0, 2.0}) == Approx(2.0 * std::pow(1.5, 3)));
    CHECK(s.d1_r(1.5) == Approx(6.0));
    CHECK(s.d2_r(1.5) == Approx(12.0));
    CHECK_THROWS_AS(RadialSolution({0.0, 3.0, {}, 0}).validate(), ParameterError);
    CHECK_THROWS_AS(RadialSolution({1.0, 1.0, {}, 0}).validate(), ParameterError);
    CHECK_THROWS_AS(RadialSolution({1.0, 2.0, {}, -1}).validate(), ParameterError);
  }
}
