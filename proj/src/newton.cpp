#include "deadcore/newton.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "deadcore/errors.hpp"

namespace deadcore {

namespace {

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void project(Eigen::VectorXd& x, const std::vector<char>& nonneg) {
  if (nonneg.empty()) return;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (nonneg[k] && x[k] < 0.0) x[k] = 0.0;
}

std::vector<double*> diagonal_slots(SpMat& J) {
  std::vector<double*> d(J.cols(), nullptr);
  for (int c = 0; c < J.outerSize(); ++c)
    for (SpMat::InnerIterator it(J, c); it; ++it)
      if (it.row() == c) d[c] = &it.valueRef();
  for (auto* p : d)
    if (!p) throw Error("pseudo-time stepping needs a structurally nonzero diagonal");
  return d;
}

}  // namespace

NewtonResult newton_solve(NonlinearProblem& prob, Eigen::VectorXd& x, const NewtonOptions& opts) {
  const auto n = static_cast<Eigen::Index>(prob.size());
  if (x.size() != n) throw ArgumentError("initial guess has the wrong length");
  if (!(opts.initial_step > 0.0 && opts.initial_step <= 1.0)) throw ArgumentError("initial step must lie in (0, 1]");
  const auto& nonneg = prob.nonnegative();
  project(x, nonneg);

  NewtonResult out;
  Eigen::VectorXd F(n), Ft(n), xt(n), dx(n);
  prob.residual(x, F);
  double res = sup_norm(F);
  out.history.push_back(res);
  if (n == 0 || res <= opts.tol) {
    out.residual = res;
    return out;
  }

  SpMat J;
  Eigen::SparseLU<SpMat, Eigen::NaturalOrdering<int>> lu;
  bool analyzed = false;
  const bool ptc = opts.pseudo_dt > 0.0;
  double dt = opts.pseudo_dt;
  double best = res;
  int since_best = 0;

  bool factored = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    // A stale factorization is kept while its steps still contract the
    // residual by half; otherwise the Jacobian is rebuilt at x.
    bool stale = factored && opts.reuse_factorization && !ptc;
    double t = opts.initial_step;
    double res_t = res;
    const double merit = F.squaredNorm();
    if (stale) {
      dx = lu.solve(-F);
      xt = x + t * dx;
      project(xt, nonneg);
      prob.residual(xt, Ft);
      res_t = sup_norm(Ft);
      if (!(res_t <= 0.5 * res)) stale = false;
    }
    if (!stale) {
      prob.jacobian(x, J);
      if (ptc) {
        const double shift = -prob.pseudo_time_sign() / dt;
        for (auto* p : diagonal_slots(J)) *p += shift;
      }
      if (!analyzed) {
        lu.analyzePattern(J);
        analyzed = true;
      }
      lu.factorize(J);
      if (lu.info() != Eigen::Success) {
        throw ConvergenceError("Newton linear solve failed (singular Jacobian)", res, it);
      }
      factored = true;
      ++out.factorizations;
      dx = lu.solve(-F);
      t = opts.initial_step;
      while (true) {
        xt = x + t * dx;
        project(xt, nonneg);
        prob.residual(xt, Ft);
        res_t = sup_norm(Ft);
        if (ptc || Ft.squaredNorm() <= (1.0 - 2e-4 * t) * merit || t <= opts.min_step) break;
        t *= 0.5;
      }
      if (ptc && !(res_t <= 2.0 * res)) {
        // Rejected pseudo-time step: retry from x with a shorter step.
        dt *= 0.25;
        out.history.push_back(res);
        out.iterations = it;
        if (++since_best >= opts.instability_window) {
          std::ostringstream os;
          os << "pseudo-time residual grew for " << since_best << " steps; try a smaller pseudo_dt";
          throw InstabilityError(os.str(), res, it);
        }
        continue;
      }
    }
    x.swap(xt);
    F.swap(Ft);
    const double prev = res;
    res = res_t;
    out.history.push_back(res);
    out.iterations = it;
    if (!std::isfinite(res)) throw ConvergenceError("Newton residual is not finite", res, it);
    if (res <= opts.tol) {
      out.residual = res;
      return out;
    }
    if (ptc) {
      dt = std::min(dt * prev / std::max(res, 1e-300), opts.max_pseudo_dt);
      if (res < best) {
        best = res;
        since_best = 0;
      } else if (++since_best >= opts.instability_window) {
        std::ostringstream os;
        os << "pseudo-time residual grew for " << since_best << " steps; try a smaller pseudo_dt";
        throw InstabilityError(os.str(), res, it);
      }
    }
  }
  std::ostringstream os;
  os << "Newton did not reach tol " << opts.tol << " in " << opts.max_iter << " iterations";
  throw ConvergenceError(os.str(), res, opts.max_iter);
}

std::vector<std::size_t> nested_dissection_order(int nx, int ny, const std::vector<char>& active) {
  std::vector<std::size_t> order;
  auto emit = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(j) * nx + i;
    if (active[k]) order.push_back(k);
  };
  // Half-open index box [i0, i1) x [j0, j1); separators are eliminated last.
  std::function<void(int, int, int, int)> rec = [&](int i0, int i1, int j0, int j1) {
    const int w = i1 - i0, hgt = j1 - j0;
    if (w <= 0 || hgt <= 0) return;
    if (w * hgt <= 64) {
      for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) emit(i, j);
      return;
    }
    if (w >= hgt) {
      const int c = (i0 + i1) / 2;
      rec(i0, c, j0, j1);
      rec(c + 1, i1, j0, j1);
      for (int j = j0; j < j1; ++j) emit(c, j);
    } else {
      const int c = (j0 + j1) / 2;
      rec(i0, i1, j0, c);
      rec(i0, i1, c + 1, j1);
      for (int i = i0; i < i1; ++i) emit(i, c);
    }
  };
  rec(0, nx, 0, ny);
  return order;
}

}  // namespace deadcore
