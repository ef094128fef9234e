#include <benchmark/benchmark.h>

#include "framecell/condense.hpp"
#include "framecell/fcm/assembly.hpp"
#include "framecell/fcm/boundary.hpp"
#include "framecell/fcm/solver.hpp"

using namespace framecell;

namespace {

const Material kSteel(2.0e5, 0.3);

SubstructureSpec segmentSpec() {
  SubstructureSpec spec{
      Domain(ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(30, 0, 0), 8.0), kSteel), {}, {}};
  InterfaceSection a;
  a.centroid = Vec3(0, 0, 0);
  a.normal = Vec3(-1, 0, 0);
  a.shape = 8.0;
  a.globalNodeId = 1;
  InterfaceSection b = a;
  b.centroid = Vec3(30, 0, 0);
  b.normal = Vec3(1, 0, 0);
  b.globalNodeId = 2;
  spec.interfaces = {a, b};
  spec.fcm.resolution = {8, 4, 4};
  spec.fcm.p = 3;
  spec.fcm.octreeDepth = 3;
  return spec;
}

struct PenalizedSystem {
  std::shared_ptr<fcm::CellGrid> grid;
  fcm::SparseSym A;
};

PenalizedSystem buildSystem(const SubstructureSpec& spec) {
  PenalizedSystem s;
  fcm::GridParams gp;
  gp.resolution = spec.fcm.resolution;
  gp.p = spec.fcm.p;
  s.grid = std::make_shared<fcm::CellGrid>(spec.domain, gp);
  fcm::SparseSym K = fcm::assemble_unconstrained(
      *s.grid, spec.domain, spec.domain.material(), fcm::QuadratureScheme{spec.fcm.octreeDepth, 0}, 1);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.grid->numDofs());
  for (const auto& iface : spec.interfaces)
    fcm::penalty_dirichlet(*s.grid, fcm::patch_from_section(iface),
                           [](const Vec3&) { return Vec3::Zero(); }, spec.fcm.beta, trips, rhs);
  fcm::SparseSym P(s.grid->numDofs(), s.grid->numDofs());
  P.setFromTriplets(trips.begin(), trips.end());
  s.A = K + P;
  return s;
}

}  // namespace

static void BM_Factorize(benchmark::State& state) {
  const PenalizedSystem s = buildSystem(segmentSpec());
  for (auto _ : state) {
    fcm::Factorization fact(s.A);
    benchmark::DoNotOptimize(fact.size());
  }
  state.counters["dofs"] = double(s.A.rows());
}
BENCHMARK(BM_Factorize)->Unit(benchmark::kMillisecond);

// Multi-RHS reuse: k solves against one factorization. The per-solve cost
// should stay far below the factorization cost.
static void BM_MultiRhsSolve(benchmark::State& state) {
  const int k = int(state.range(0));
  const PenalizedSystem s = buildSystem(segmentSpec());
  fcm::Factorization fact(s.A);
  std::vector<Eigen::VectorXd> rhs;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(s.A.rows());
    b[(i * 37) % s.A.rows()] = 1.0;
    rhs.push_back(b);
  }
  for (auto _ : state) {
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd x = fact.solve(rhs[i]);
      benchmark::DoNotOptimize(x.data());
    }
  }
  state.counters["rhs"] = double(k);
}
BENCHMARK(BM_MultiRhsSolve)->Arg(1)->Arg(12)->Arg(30)->Unit(benchmark::kMillisecond);

// Full condensation of the segment, the end-to-end unit of work for one
// substructure.
static void BM_Condense(benchmark::State& state) {
  const SubstructureSpec spec = segmentSpec();
  for (auto _ : state) {
    CondensedStiffness Kk = compute_condensed(spec, 1);
    benchmark::DoNotOptimize(Kk.K.data());
  }
}
BENCHMARK(BM_Condense)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
