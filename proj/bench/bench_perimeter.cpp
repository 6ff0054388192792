// Compares the serial reference quadrature kernel against the OpenMP one
// on the perimeter integrand, for the flat plane and the three-arc cone.
// The two kernels are bitwise-identical by construction; this target
// measures what the parallel grid sweep buys at various resolutions.

#include <benchmark/benchmark.h>

#include "hcone/arcs.hpp"
#include "hcone/cone.hpp"
#include "hcone/geometry.hpp"
#include "hcone/perimeter.hpp"

namespace {

using namespace hcone;

GraphField three_arc_graph() {
  const double deg = kPi / 180.0;
  return graph_of(ConeSurface(ArcFamily::validate({{90.0 * deg, 45.0 * deg},
                                                   {210.0 * deg, 22.5 * deg},
                                                   {330.0 * deg, 37.5 * deg}})));
}

void bench_plane_serial(benchmark::State& state) {
  const GraphField g = plane_graph();
  const Domain2D dom =
      Domain2D::disk({0.0, 0.0}, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(perimeter_of_graph_serial(g, dom));
  }
}

void bench_plane_parallel(benchmark::State& state) {
  const GraphField g = plane_graph();
  const Domain2D dom =
      Domain2D::disk({0.0, 0.0}, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(perimeter_of_graph(g, dom));
  }
}

void bench_cone_serial(benchmark::State& state) {
  const GraphField g = three_arc_graph();
  const Domain2D dom =
      Domain2D::disk({0.0, 0.0}, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(perimeter_of_graph_serial(g, dom));
  }
}

void bench_cone_parallel(benchmark::State& state) {
  const GraphField g = three_arc_graph();
  const Domain2D dom =
      Domain2D::disk({0.0, 0.0}, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(perimeter_of_graph(g, dom));
  }
}

BENCHMARK(bench_plane_serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_plane_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_cone_serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_cone_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
