#include <benchmark/benchmark.h>

#include "framecell/fcm/assembly.hpp"
#include "framecell/fcm/quadrature.hpp"

using namespace framecell;

namespace {
const Material kSteel(2.0e5, 0.3);
}

// Cut-cell quadrature point generation as a function of octree depth.
static void BM_CutCellQuadrature(benchmark::State& state) {
  const int depth = int(state.range(0));
  Domain d(ImplicitShape::sphere(Vec3(0, 0, 0), 1.0), kSteel);
  const Box cut{Vec3(0.5, -0.25, -0.25), Vec3(1.25, 0.25, 0.25)};
  size_t points = 0;
  for (auto _ : state) {
    auto q = fcm::cell_quadrature(d, cut, fcm::CellStatus::Cut, depth, 4);
    points = q.size();
    benchmark::DoNotOptimize(q.data());
  }
  state.counters["points"] = double(points);
}
BENCHMARK(BM_CutCellQuadrature)->DenseRange(0, 5);

// One cut-cell elasticity matrix, dominated by the batched gradient-moment
// contractions; depth controls the quadrature load.
static void BM_CutCellStiffness(benchmark::State& state) {
  const int depth = int(state.range(0));
  Domain d(ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(10, 0, 0), 3.0), kSteel);
  fcm::GridParams gp;
  gp.resolution = {5, 4, 4};
  gp.p = 3;
  fcm::CellGrid grid(d, gp);

  int cutCell = -1;
  for (int c = 0; c < grid.numActiveCells(); ++c) {
    const auto [i, j, k] = grid.activeCells()[c];
    if (grid.status(i, j, k) == fcm::CellStatus::Cut) {
      cutCell = c;
      break;
    }
  }

  for (auto _ : state) {
    auto K = fcm::cell_stiffness(grid, cutCell, d, kSteel, fcm::QuadratureScheme{depth, 0});
    benchmark::DoNotOptimize(K.data());
  }
}
BENCHMARK(BM_CutCellStiffness)->DenseRange(0, 4);

// Full assembly of a small node model across polynomial degrees.
static void BM_AssembleUnconstrained(benchmark::State& state) {
  const int p = int(state.range(0));
  Domain d(ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(20, 0, 0), 6.0), kSteel);
  fcm::GridParams gp;
  gp.resolution = {8, 5, 5};
  gp.p = p;
  fcm::CellGrid grid(d, gp);
  for (auto _ : state) {
    auto K = fcm::assemble_unconstrained(grid, d, kSteel, fcm::QuadratureScheme{3, 0}, 1);
    benchmark::DoNotOptimize(K.nonZeros());
  }
  state.counters["dofs"] = double(grid.numDofs());
}
BENCHMARK(BM_AssembleUnconstrained)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
