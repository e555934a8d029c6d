#include <cmath>

#include "deadcore/kernels.hpp"

namespace deadcore {
namespace kernels {

void degenerate_operator_node(const StencilSet& st, const OperatorSpec& spec, double p, double delta,
                              const double* u, std::size_t id, double* value, JacRow* jac) {
  const LocalDerivs d = st.eval(id, u);
  const double x = st.x(id), y = st.y(id);
  const double g2 = d.ux * d.ux + d.uy * d.uy + delta * delta;
  const double phi = p == 0.0 ? 1.0 : std::pow(g2, 0.5 * p);
  const Sym2 Ce = effective_coefficients(spec, d.H, x, y);
  const double F = Ce.xx * d.H.xx + 2.0 * Ce.xy * d.H.xy + Ce.yy * d.H.yy;
  value[id] = phi * F;
  if (jac == nullptr) return;
  const LocalStencil& s = st.at(id);
  const double dphi = p == 0.0 ? 0.0 : p * phi / g2;
  JacRow& row = jac[id];
  for (int k = 0; k < LocalStencil::kSlots; ++k) {
    if (s.node[k] < 0) {
      row[k] = 0.0;
      continue;
    }
    const double dF = Ce.xx * s.wxx[k] + 2.0 * Ce.xy * s.wxy[k] + Ce.yy * s.wyy[k];
    const double dg = d.ux * s.wx[k] + d.uy * s.wy[k];
    row[k] = phi * dF + dphi * dg * F;
  }
}

void degenerate_operator_serial(const StencilSet& st, const OperatorSpec& spec, double p, double delta,
                                const double* u, double* value, JacRow* jac) {
  const std::size_t n = st.size();
  for (std::size_t id = 0; id < n; ++id) degenerate_operator_node(st, spec, p, delta, u, id, value, jac);
}

}  // namespace kernels

void degenerate_operator(const StencilSet& st, const OperatorSpec& spec, double p, double delta, const double* u,
                         double* value, JacRow* jac, Exec exec) {
  if (exec == Exec::parallel) kernels::degenerate_operator_omp(st, spec, p, delta, u, value, jac);
  else kernels::degenerate_operator_serial(st, spec, p, delta, u, value, jac);
}

}  // namespace deadcore
