#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "deadcore/grid.hpp"
#include "deadcore/operators.hpp"
#include "deadcore/params.hpp"

namespace deadcore {

struct SolveConfig {
  double epsilon = 0.0;
  /// Gradient regularization; <= 0 means the mesh width.
  double delta = -1.0;
  double tol = 1e-8;
  int max_iter = 60;
  /// First trial step of each Newton line search.
  double damping = 1.0;
  /// Empty means "auto": plain globalized Newton, restarted with
  /// pseudo-transient continuation from 0.1 / ell_hi if it stalls.
  /// A value switches on pseudo-transient continuation from that step.
  std::optional<double> pseudo_dt;
  /// Smoothing width of sub-linear reaction laws near zero.
  double eta = 1e-14;
  /// Coarsest mesh width used by the nested start (disks only).
  double coarsest_h = 1.0 / 64.0;
  Exec exec = Exec::sequential;

  void validate() const;
};

struct SolveDiagnostics {
  std::vector<double> residual_history;
  int iterations = 0;
  double residual = 0.0;
  std::vector<int> level_iterations;
  std::vector<double> level_h;
};

struct SystemSolution {
  Field u;
  Field v;
  SolveDiagnostics diagnostics;
};

using SpecPair = std::pair<OperatorSpec, OperatorSpec>;
using TracePair = std::pair<BoundaryTrace, BoundaryTrace>;

/// Penalized system
///   |grad u|_delta^p F(D^2u) = v_+^lambda1 + eps,  |grad v|_delta^q G(D^2v) = u_+^lambda2 + eps
/// on the grid's domain with Dirichlet data. For eps == 0 the iterates are kept
/// in the nonnegative cone. An initial guess skips the nested start.
SystemSolution solve_penalized(const SystemParams& params, const SpecPair& specs, const TracePair& bc,
                               const SolveConfig& cfg, const GridPtr& grid,
                               const std::pair<Field, Field>* initial = nullptr);

struct DeadcoreStage {
  double epsilon = 0.0;
  Field u;
  Field v;
  SolveDiagnostics diagnostics;
};

struct DeadcoreSolution {
  Field u;
  Field v;
  std::vector<DeadcoreStage> stages;
  /// Largest violation of u_{eps_i} <= u_{eps_{i+1}} (and for v) across stages.
  double monotonicity_violation = 0.0;
};

/// Continuation in eps with warm starts along a strictly decreasing schedule
/// ending at a value >= 0. Throws ConvergenceError if stage monotonicity
/// fails by more than cfg.tol.
DeadcoreSolution solve_deadcore(const SystemParams& params, const SpecPair& specs, const TracePair& bc,
                                const SolveConfig& cfg, const GridPtr& grid, const std::vector<double>& eps_schedule);

struct HenonTermSpec {
  double c = 1.0;
  double alpha = 0.0;
  double mu = 0.0;
};

struct HenonSolution {
  Field u;
  SolveDiagnostics diagnostics;
};

/// |grad u|_delta^p F(D^2u) = sum_i c_i |x|^alpha_i u_+^mu_i (+ eps).
/// Terms may reach mu_i = 1 + p.
HenonSolution solve_henon_grid(double p, const OperatorSpec& spec, const std::vector<HenonTermSpec>& terms,
                               const BoundaryTrace& bc, const SolveConfig& cfg, const GridPtr& grid,
                               const Field* initial = nullptr);

/// True iff a <= b + tol at every interior and boundary node.
bool check_comparison(const Field& a, const Field& b, double tol);

/// bc_sup + c_abp diam^2 rhs_sup^(1/(1+p)) - max over the domain of abs(u).
double apriori_bound_check(const Field& u, double bc_sup, double rhs_sup, double p, double diam,
                           double c_abp = 1.0);

}  // namespace deadcore
