#include <cmath>
#include <numeric>

#include "doctest.h"
#include "deadcore/errors.hpp"
#include "deadcore/newton.hpp"
#include "deadcore/reaction.hpp"

using namespace deadcore;
using doctest::Approx;

namespace {

// x_i^3 + x_i - b_i + 0.1 (x_{i-1} + x_{i+1}) = 0.
class Cubic : public NonlinearProblem {
 public:
  explicit Cubic(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& F) override {
    F.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      F[i] = x[i] * x[i] * x[i] + x[i] - b(i);
      if (i > 0) F[i] += 0.1 * x[i - 1];
      if (i + 1 < n_) F[i] += 0.1 * x[i + 1];
    }
  }
  void jacobian(const Eigen::VectorXd& x, SpMat& J) override {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < n_; ++i) {
      t.emplace_back(i, i, 3 * x[i] * x[i] + 1);
      if (i > 0) t.emplace_back(i, i - 1, 0.1);
      if (i + 1 < n_) t.emplace_back(i, i + 1, 0.1);
    }
    J.resize(n_, n_);
    J.setFromTriplets(t.begin(), t.end());
  }
  static double b(std::size_t i) { return 1.0 + 10.0 * static_cast<double>(i % 5); }

 private:
  std::size_t n_;
};

}  // namespace

TEST_SUITE("newton") {
  TEST_CASE("globalized newton converges from a far start") {
    Cubic prob(40);
    for (bool reuse : {false, true}) {
      Eigen::VectorXd x = Eigen::VectorXd::Constant(40, 50.0);
      NewtonOptions o;
      o.tol = 1e-12;
      o.reuse_factorization = reuse;
      const NewtonResult r = newton_solve(prob, x, o);
      Eigen::VectorXd F;
      prob.residual(x, F);
      CHECK(F.lpNorm<Eigen::Infinity>() <= 1e-12);
      CHECK(r.residual <= 1e-12);
      CHECK(r.factorizations <= r.iterations + 1);
      CHECK_FALSE(r.history.empty());
    }
  }

  TEST_CASE("pseudo-transient continuation converges") {
    Cubic prob(10);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
    NewtonOptions o;
    o.pseudo_dt = 1e-2;
    o.max_iter = 200;
    CHECK(newton_solve(prob, x, o).residual <= o.tol);
  }

  TEST_CASE("iteration limit raises a convergence error") {
    Cubic prob(10);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(10, 100.0);
    NewtonOptions o;
    o.max_iter = 1;
    try {
      newton_solve(prob, x, o);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.iterations() == 1);
      CHECK(e.last_residual() > o.tol);
    }
  }

  TEST_CASE("nested dissection order is a permutation of active cells") {
    for (int n : {1, 2, 7, 32, 33}) {
      std::vector<char> active(static_cast<std::size_t>(n) * n, 1);
      for (std::size_t k = 0; k < active.size(); k += 3) active[k] = 0;
      const auto ord = nested_dissection_order(n, n, active);
      std::vector<int> seen(active.size(), 0);
      for (auto c : ord) {
        REQUIRE(c < active.size());
        CHECK(active[c]);
        ++seen[c];
      }
      std::size_t count = 0;
      for (std::size_t k = 0; k < active.size(); ++k) {
        CHECK(seen[k] == (active[k] ? 1 : 0));
        count += active[k];
      }
      CHECK(ord.size() == count);
    }
  }
}

TEST_SUITE("reaction") {
  TEST_CASE("regularized power law is C1 at the blend point") {
    const double eta = 1e-3;
    for (double order : {0.0, 0.25, 0.5, 0.9}) {
      const double below = reaction_power(eta * (1 - 1e-12), order, eta);
      const double above = reaction_power(eta, order, eta);
      CHECK(below == Approx(above).epsilon(1e-9));
      const double db = reaction_power_derivative(eta * (1 - 1e-12), order, eta);
      const double da = order == 0.0 ? 0.0 : order * std::pow(eta, order - 1);
      CHECK(db == Approx(da).epsilon(1e-8).scale(1));
      CHECK(reaction_power_derivative(0.0, order, eta) == Approx((2 - order) * std::pow(eta, order - 1)));
      CHECK(reaction_power(0.0, order, eta) == 0.0);
      CHECK(reaction_power(-1.0, order, eta) == 0.0);
      // Derivative agrees with a central difference inside the blend.
      const double t = 0.4 * eta, s = 1e-9;
      CHECK(reaction_power_derivative(t, order, eta) ==
            Approx((reaction_power(t + s, order, eta) - reaction_power(t - s, order, eta)) / (2 * s)).epsilon(1e-5));
    }
    CHECK(reaction_power(4.0, 0.5, 1e-14) == 2.0);
    CHECK(reaction_power(3.0, 1.0, 1e-14) == 3.0);
    CHECK(reaction_power(2.0, 2.0, 1e-14) == Approx(4.0));
    CHECK(reaction_power_derivative(2.0, 2.0, 1e-14) == Approx(4.0));
    CHECK(reaction_power_derivative(-2.0, 2.0, 1e-14) == 0.0);
  }
}
