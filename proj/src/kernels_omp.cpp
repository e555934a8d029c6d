#include "deadcore/kernels.hpp"

namespace deadcore {
namespace kernels {

void degenerate_operator_omp(const StencilSet& st, const OperatorSpec& spec, double p, double delta,
                             const double* u, double* value, JacRow* jac) {
  const auto n = static_cast<long long>(st.size());
#pragma omp parallel for schedule(static)
  for (long long id = 0; id < n; ++id)
    degenerate_operator_node(st, spec, p, delta, u, static_cast<std::size_t>(id), value, jac);
}

}  // namespace kernels
}  // namespace deadcore
