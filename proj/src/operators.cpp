#include "deadcore/operators.hpp"

#include <cmath>
#include <sstream>

#include "deadcore/errors.hpp"
#include "deadcore/kernels.hpp"
#include "deadcore/stencil.hpp"

namespace deadcore {

std::array<double, 2> Sym2::eigenvalues() const {
  const double m = 0.5 * (xx + yy);
  const double d = std::hypot(0.5 * (xx - yy), xy);
  return {m - d, m + d};
}

void OperatorSpec::validate() const {
  if (!(ell_lo > 0.0) || !(ell_hi >= ell_lo) || !std::isfinite(ell_hi)) {
    throw ParameterError("operator ellipticity must satisfy 0 < ell_lo <= ell_hi");
  }
  if (coefficient && kind != OperatorKind::trace) {
    throw ParameterError("coefficient fields are only allowed for the trace operator");
  }
}

OperatorSpec OperatorSpec::pucci_plus(double lo, double hi) {
  OperatorSpec s{OperatorKind::pucci_plus, lo, hi, {}};
  s.validate();
  return s;
}

OperatorSpec OperatorSpec::pucci_minus(double lo, double hi) {
  OperatorSpec s{OperatorKind::pucci_minus, lo, hi, {}};
  s.validate();
  return s;
}

OperatorSpec OperatorSpec::trace_identity(double scale) {
  OperatorSpec s{OperatorKind::trace, scale, scale, {}};
  s.validate();
  return s;
}

OperatorSpec OperatorSpec::trace_with(CoefficientField a, double lo, double hi) {
  OperatorSpec s{OperatorKind::trace, lo, hi, std::move(a)};
  s.validate();
  return s;
}

namespace {

void require_stencil(const Field& f, int i, int j) {
  const Grid& g = f.grid();
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (!g.in_domain(i + di, j + dj)) {
        std::ostringstream os;
        os << "3x3 stencil at (" << i << ", " << j << ") leaves the domain";
        throw StencilError(os.str());
      }
}

void check_coefficient(const OperatorSpec& spec, const Sym2& a) {
  const auto ev = a.eigenvalues();
  const double slack = 1e-12 * spec.ell_hi;
  if (ev[0] < spec.ell_lo - slack || ev[1] > spec.ell_hi + slack) {
    throw ParameterError("coefficient matrix spectrum outside [ell_lo, ell_hi]");
  }
}

}  // namespace

Sym2 hessian(const Field& f, int i, int j) {
  require_stencil(f, i, j);
  const double h2 = f.grid().h() * f.grid().h();
  Sym2 H;
  H.xx = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / h2;
  H.yy = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / h2;
  H.xy = (f(i + 1, j + 1) - f(i - 1, j + 1) - f(i + 1, j - 1) + f(i - 1, j - 1)) / (4.0 * h2);
  return H;
}

std::array<double, 2> gradient(const Field& f, int i, int j) {
  require_stencil(f, i, j);
  const double h = f.grid().h();
  return {(f(i + 1, j) - f(i - 1, j)) / (2.0 * h), (f(i, j + 1) - f(i, j - 1)) / (2.0 * h)};
}

double apply_operator(const OperatorSpec& spec, const Sym2& hess, double x, double y) {
  switch (spec.kind) {
    case OperatorKind::pucci_plus:
    case OperatorKind::pucci_minus: {
      const auto ev = hess.eigenvalues();
      const bool plus = spec.kind == OperatorKind::pucci_plus;
      double s = 0.0;
      for (double m : ev) {
        const double c = (m > 0.0) == plus ? spec.ell_hi : spec.ell_lo;
        s += c * m;
      }
      return s;
    }
    case OperatorKind::trace: {
      if (!spec.coefficient) return spec.ell_hi * hess.trace();
      const Sym2 a = spec.coefficient(x, y);
      return a.xx * hess.xx + 2.0 * a.xy * hess.xy + a.yy * hess.yy;
    }
  }
  return 0.0;
}

Sym2 effective_coefficients(const OperatorSpec& spec, const Sym2& hess, double x, double y) {
  if (spec.kind == OperatorKind::trace) {
    if (spec.coefficient) return spec.coefficient(x, y);
    return Sym2{spec.ell_hi, 0.0, spec.ell_hi};
  }
  const auto ev = hess.eigenvalues();
  const bool plus = spec.kind == OperatorKind::pucci_plus;
  const double c_lo = (ev[0] > 0.0) == plus ? spec.ell_hi : spec.ell_lo;
  const double c_hi = (ev[1] > 0.0) == plus ? spec.ell_hi : spec.ell_lo;
  if (c_lo == c_hi) return Sym2{c_lo, 0.0, c_lo};
  // Unit eigenvector q of the larger eigenvalue; C = c_lo I + (c_hi - c_lo) q q^T.
  const double th = 0.5 * std::atan2(2.0 * hess.xy, hess.xx - hess.yy);
  const double cs = std::cos(th), sn = std::sin(th);
  const double dc = c_hi - c_lo;
  return Sym2{c_lo + dc * cs * cs, dc * cs * sn, c_lo + dc * sn * sn};
}

namespace {

Field residual_with(const StencilSet& st, const Field& u, const OperatorSpec& spec, double p, double delta,
                    const Field& rhs, const std::vector<double>& uvals, Exec exec) {
  spec.validate();
  require_same_grid(u, rhs);
  if (p < 0.0 && !(delta > 0.0)) throw ParameterError("singular degeneracy law needs delta > 0");
  if (delta < 0.0) throw ParameterError("delta must be nonnegative");
  if (spec.coefficient)
    for (std::size_t id = 0; id < st.size(); ++id) check_coefficient(spec, spec.coefficient(st.x(id), st.y(id)));
  std::vector<double> val(st.size());
  degenerate_operator(st, spec, p, delta, uvals.data(), val.data(), nullptr, exec);
  Field out(u.grid_ptr(), 0.0);
  for (std::size_t id = 0; id < st.size(); ++id) out[st.node(id)] = val[id] - rhs[st.node(id)];
  return out;
}

}  // namespace

Field degenerate_residual(const Field& u, const OperatorSpec& spec, double p, double delta, const Field& rhs,
                          Exec exec) {
  StencilSet st(u.grid_ptr(), StencilMode::central);
  return residual_with(st, u, spec, p, delta, rhs, u.values(), exec);
}

Field degenerate_residual(const Field& u, const OperatorSpec& spec, double p, double delta, const Field& rhs,
                          const BoundaryTrace& bc, Exec exec) {
  StencilSet st(u.grid_ptr(), StencilMode::boundary_fitted, &bc);
  std::vector<double> vals = u.values();
  st.fill_boundary(vals, bc);
  return residual_with(st, u, spec, p, delta, rhs, vals, exec);
}

}  // namespace deadcore
