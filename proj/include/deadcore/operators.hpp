#pragma once

#include <array>
#include <functional>

#include "deadcore/grid.hpp"

namespace deadcore {

struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double trace() const { return xx + yy; }
  /// Eigenvalues in ascending order.
  std::array<double, 2> eigenvalues() const;
};

enum class OperatorKind { pucci_plus, pucci_minus, trace };

using CoefficientField = std::function<Sym2(double, double)>;

struct OperatorSpec {
  OperatorKind kind = OperatorKind::trace;
  double ell_lo = 1.0;
  double ell_hi = 1.0;
  /// Trace kind only; empty means ell_hi times the identity.
  CoefficientField coefficient;

  void validate() const;

  static OperatorSpec pucci_plus(double lo, double hi);
  static OperatorSpec pucci_minus(double lo, double hi);
  static OperatorSpec trace_identity(double scale = 1.0);
  static OperatorSpec trace_with(CoefficientField a, double lo, double hi);
};

/// Central second differences; needs the 3x3 block around (i, j) in the
/// closed domain, otherwise StencilError.
Sym2 hessian(const Field& f, int i, int j);
std::array<double, 2> gradient(const Field& f, int i, int j);

double apply_operator(const OperatorSpec& spec, const Sym2& hess, double x, double y);

/// Matrix C with apply_operator(spec, H, x) = tr(C H) at this H. For Pucci
/// operators C is built from the eigenvectors of H (ties go to the lower
/// branch for pucci_plus and the upper for pucci_minus).
Sym2 effective_coefficients(const OperatorSpec& spec, const Sym2& hess, double x, double y);

/// Interior values (|grad u|^2 + delta^2)^(p/2) F(D^2 u, x) - rhs, zero on
/// boundary and exterior nodes. Uses central differences at every interior
/// node, reading exterior node values where the stencil needs them.
Field degenerate_residual(const Field& u, const OperatorSpec& spec, double p, double delta, const Field& rhs,
                          Exec exec = Exec::sequential);

/// Same, with the boundary-fitted stencil used by the grid solver (ghost
/// values taken from the boundary trace at the true boundary crossing).
Field degenerate_residual(const Field& u, const OperatorSpec& spec, double p, double delta, const Field& rhs,
                          const BoundaryTrace& bc, Exec exec = Exec::sequential);

}  // namespace deadcore
