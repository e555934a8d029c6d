#pragma once

#include <array>

#include "deadcore/operators.hpp"
#include "deadcore/stencil.hpp"

namespace deadcore {

using JacRow = std::array<double, LocalStencil::kSlots>;

/// Per interior node: value[id] = (|grad u|^2 + delta^2)^(p/2) F(D^2 u, x) and,
/// if jac is non-null, the derivative of that value with respect to each
/// stencil slot. Both back ends compute identical bits.
namespace kernels {

void degenerate_operator_serial(const StencilSet& st, const OperatorSpec& spec, double p, double delta,
                                const double* u, double* value, JacRow* jac);
void degenerate_operator_omp(const StencilSet& st, const OperatorSpec& spec, double p, double delta,
                             const double* u, double* value, JacRow* jac);

/// Single-node body shared by both back ends.
void degenerate_operator_node(const StencilSet& st, const OperatorSpec& spec, double p, double delta,
                              const double* u, std::size_t id, double* value, JacRow* jac);

}  // namespace kernels

void degenerate_operator(const StencilSet& st, const OperatorSpec& spec, double p, double delta, const double* u,
                         double* value, JacRow* jac, Exec exec);

}  // namespace deadcore
