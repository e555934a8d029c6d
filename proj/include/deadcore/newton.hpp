#pragma once

#include <Eigen/Sparse>
#include <vector>

namespace deadcore {

using SpMat = Eigen::SparseMatrix<double>;

/// Square nonlinear system F(x) = 0 whose Jacobian keeps a fixed sparsity
/// pattern. Unknowns are expected in an order that suits a fill-reducing
/// natural-order LU.
class NonlinearProblem {
 public:
  virtual ~NonlinearProblem() = default;
  virtual std::size_t size() const = 0;
  virtual void residual(const Eigen::VectorXd& x, Eigen::VectorXd& F) = 0;
  /// Fills values of J (pattern fixed after the first call).
  virtual void jacobian(const Eigen::VectorXd& x, SpMat& J) = 0;
  /// Sign s of the pseudo-time flow dx/dt = s F(x). The default -1 suits
  /// Jacobians with positive spectrum; elliptic residuals of the form
  /// operator - rhs use +1.
  virtual double pseudo_time_sign() const { return -1.0; }
  /// Per-unknown lower bound 0 (true) or unconstrained (false); empty means none.
  virtual const std::vector<char>& nonnegative() const { return none_; }

 private:
  std::vector<char> none_;
};

struct NewtonOptions {
  double tol = 1e-8;
  int max_iter = 50;
  /// > 0 switches on pseudo-transient continuation starting at this step.
  double pseudo_dt = 0.0;
  double max_pseudo_dt = 1e12;
  int instability_window = 50;
  double min_step = 1.0 / 1024.0;
  double initial_step = 1.0;
  /// Reuse the last LU while full steps halve the residual (ignored with pseudo-time).
  bool reuse_factorization = false;
};

struct NewtonResult {
  int iterations = 0;
  int factorizations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

/// Globalized Newton: backtracking on the squared residual norm (convergence
/// is tested in the sup norm), projection onto the nonnegative cone where
/// requested. Throws ConvergenceError when the
/// iteration limit is hit and InstabilityError when pseudo-time stepping
/// keeps increasing the residual.
NewtonResult newton_solve(NonlinearProblem& prob, Eigen::VectorXd& x, const NewtonOptions& opts);

/// Geometric nested-dissection order of the cells of an nx x ny lattice,
/// restricted to cells with active[j*nx+i]. Returns the cell indices in
/// elimination order.
std::vector<std::size_t> nested_dissection_order(int nx, int ny, const std::vector<char>& active);

}  // namespace deadcore
