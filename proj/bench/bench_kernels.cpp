#include <benchmark/benchmark.h>

#include <cmath>

#include "deadcore/kernels.hpp"
#include "deadcore/stencil.hpp"

using namespace deadcore;

namespace {

struct Setup {
  GridPtr grid;
  BoundaryTrace bc = BoundaryTrace::constant(1.0);
  StencilSet st;
  std::vector<double> u;
  std::vector<double> value;
  std::vector<JacRow> jac;

  explicit Setup(int N)
      : grid(Grid::disk(N)), st(grid, StencilMode::boundary_fitted, &bc), u(grid->size()), value(st.size()),
        jac(st.size()) {
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const double x = grid->x(i), y = grid->y(j);
        u[grid->index(i, j)] = std::pow(std::max(std::hypot(x, y) - 0.3, 0.0), 4.0) + 0.1 * x * y;
      }
    st.fill_boundary(u, bc);
  }
};

void run(benchmark::State& state, Exec exec, bool with_jac) {
  static Setup s(static_cast<int>(state.range(0)));
  if (s.grid->N() != state.range(0)) s = Setup(static_cast<int>(state.range(0)));
  const OperatorSpec spec = OperatorSpec::pucci_plus(0.5, 2.0);
  for (auto _ : state) {
    degenerate_operator(s.st, spec, 1.0, s.grid->h(), s.u.data(), s.value.data(), with_jac ? s.jac.data() : nullptr,
                        exec);
    benchmark::DoNotOptimize(s.value.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(s.st.size()));
}

void BM_residual_serial(benchmark::State& st) { run(st, Exec::sequential, false); }
void BM_residual_omp(benchmark::State& st) { run(st, Exec::parallel, false); }
void BM_jacobian_serial(benchmark::State& st) { run(st, Exec::sequential, true); }
void BM_jacobian_omp(benchmark::State& st) { run(st, Exec::parallel, true); }

}  // namespace

BENCHMARK(BM_residual_serial)->Arg(257)->Arg(513);
BENCHMARK(BM_residual_omp)->Arg(257)->Arg(513);
BENCHMARK(BM_jacobian_serial)->Arg(257)->Arg(513);
BENCHMARK(BM_jacobian_omp)->Arg(257)->Arg(513);

BENCHMARK_MAIN();
