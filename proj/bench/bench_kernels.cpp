// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "pbe/analysis.hpp"
#include "pbe/exact.hpp"
#include "pbe/problems.hpp"
#include "pbe/refsolver.hpp"
#include "pbe/series.hpp"

namespace {

using namespace pbe;

const PolyExp1D& unit_exp() {
  static const PolyExp1D f = PolyExp1D::monomial(make_rational(1), {0, 0}, {make_rational(1)});
  return f;
}

GridFunction grid_state(std::size_t n_cells) {
  GridSpec spec;
  spec.n_cells = n_cells;
  return sample(unit_exp(), spec, 0.0);
}

template <GridFunction (*Rhs)(const ProblemSpec&, const GridFunction&)>
void bm_discrete_rhs(benchmark::State& state) {
  const ProblemSpec problem = Coag1D{CoagKernel::Sum, unit_exp()};
  const auto u = grid_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Rhs(problem, u));
}

template <ErrorTable (*Table)(const Series1D&, const ExactSolution&, const ErrorTableSpec&)>
void bm_error_table(benchmark::State& state) {
  static const auto series = iterate_ahpetm<1>(Coag1D{CoagKernel::Constant, unit_exp()}, 6);
  ErrorTableSpec spec;
  spec.orders = {3, 4, 5, 6};
  spec.times = {0.5, 1.0, 1.5, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(Table(series, ConstKernelExp{}, spec));
}

BENCHMARK(bm_discrete_rhs<discrete_rhs>)->Name("discrete_rhs/parallel")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_discrete_rhs<discrete_rhs_serial>)->Name("discrete_rhs/serial")->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_error_table<error_table>)->Name("error_table/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_error_table<error_table_serial>)->Name("error_table/serial")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
