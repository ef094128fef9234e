#include <doctest.h>

#include <random>

#include "framecell/fcm/assembly.hpp"
#include "framecell/fcm/boundary.hpp"
#include "framecell/fcm/field.hpp"
#include "framecell/fcm/solver.hpp"

using namespace framecell;

namespace {

const Material kSteel(2.0e5, 0.3);
constexpr double kBeta = 1e14;

struct Solved {
  std::shared_ptr<fcm::CellGrid> grid;
  Eigen::VectorXd u;
  fcm::SparseSym K;
};

// Assembles and solves with penalty Dirichlet patches and optional Neumann
// loads, mirroring the production pipeline at test scale.
Solved solveSmall(const Domain& domain, const fcm::GridParams& gp, int octreeDepth,
                  const std::vector<std::pair<fcm::SurfacePatch, fcm::FieldFn>>& dirichlet,
                  const std::vector<std::pair<fcm::SurfacePatch, fcm::FieldFn>>& neumann = {}) {
  Solved s;
  s.grid = std::make_shared<fcm::CellGrid>(domain, gp);
  s.K = fcm::assemble_unconstrained(*s.grid, domain, domain.material(),
                                    fcm::QuadratureScheme{octreeDepth, 0});

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.grid->numDofs());
  for (const auto& [patch, g] : dirichlet)
    fcm::penalty_dirichlet(*s.grid, patch, g, kBeta, trips, rhs);
  fcm::SparseSym P(s.grid->numDofs(), s.grid->numDofs());
  P.setFromTriplets(trips.begin(), trips.end());

  for (const auto& [patch, t] : neumann) rhs += fcm::neumann_load(*s.grid, patch, t);

  fcm::SparseSym A = s.K + P;
  fcm::Factorization fact(std::move(A));
  s.u = fact.solve(rhs);
  return s;
}

std::vector<std::pair<fcm::SurfacePatch, fcm::FieldFn>> boxFacePatches(const Vec3& lo,
                                                                       const Vec3& hi,
                                                                       const fcm::FieldFn& g) {
  const Vec3 e = hi - lo;
  std::vector<std::pair<fcm::SurfacePatch, fcm::FieldFn>> out;
  auto add = [&](const Vec3& corner, const Vec3& e1, const Vec3& e2) {
    out.emplace_back(fcm::SurfacePatch::rectangle(corner, e1, e2), g);
  };
  add(lo, Vec3(0, e.y(), 0), Vec3(0, 0, e.z()));                          // x = lo
  add(Vec3(hi.x(), lo.y(), lo.z()), Vec3(0, e.y(), 0), Vec3(0, 0, e.z()));  // x = hi
  add(lo, Vec3(e.x(), 0, 0), Vec3(0, 0, e.z()));                          // y = lo
  add(Vec3(lo.x(), hi.y(), lo.z()), Vec3(e.x(), 0, 0), Vec3(0, 0, e.z()));  // y = hi
  add(lo, Vec3(e.x(), 0, 0), Vec3(0, e.y(), 0));                          // z = lo
  add(Vec3(lo.x(), lo.y(), hi.z()), Vec3(e.x(), 0, 0), Vec3(0, e.y(), 0));  // z = hi
  return out;
}

}  // namespace

TEST_CASE("patch test: affine field reproduced on a body-fitted block") {
  const Vec3 lo(0, 0, 0), hi(10, 10, 10);
  Domain d(ImplicitShape::box(lo, hi), kSteel);
  fcm::GridParams gp;
  gp.resolution = {3, 3, 3};
  gp.p = 2;

  Mat3 A;
  A << 1e-3, 2e-4, -1e-4, 2e-4, -5e-4, 3e-4, -1e-4, 3e-4, 4e-4;
  const Vec3 b(0.01, -0.02, 0.005);
  fcm::FieldFn affine = [&](const Vec3& x) { return Vec3(A * x + b); };

  const Solved s = solveSmall(d, gp, 2, boxFacePatches(lo, hi, affine));
  fcm::ElasticField field(*s.grid, kSteel, s.u);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> in(0.5, 9.5);
  const Mat3 strain = 0.5 * (A + A.transpose());
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 x(in(rng), in(rng), in(rng));
    const auto sample = field.evaluate(x);
    const Vec3 exact = affine(x);
    CHECK((sample.u - exact).norm() < 1e-6 * exact.norm());
    CHECK((sample.strain - strain).norm() < 1e-6 * strain.norm() + 1e-12);
  }

  // constant stress field matches isotropic elasticity
  const Mat3 stress = kSteel.lambda() * strain.trace() * Mat3::Identity() + 2 * kSteel.mu() * strain;
  const auto sample = field.evaluate(Vec3(5, 5, 5));
  CHECK((sample.stress - stress).norm() < 1e-5 * stress.norm());
}

TEST_CASE("patch test survives a non-aligned cut boundary") {
  // the margin pushes the grid past the material box on every side, so all
  // boundary cells are cut at planes that do not line up with gridlines
  const Vec3 lo(0, 0, 0), hi(7.3, 4, 4);
  Domain d(ImplicitShape::box(lo, hi), kSteel);
  fcm::GridParams gp;
  gp.resolution = {5, 3, 3};
  gp.p = 2;
  gp.margin = 0.7;

  Mat3 A;
  A << 2e-4, 1e-4, 0, 1e-4, -1e-4, 5e-5, 0, 5e-5, 3e-4;
  const Vec3 b(0, 0.001, -0.002);
  fcm::FieldFn affine = [&](const Vec3& x) { return Vec3(A * x + b); };

  const Solved s = solveSmall(d, gp, 4, boxFacePatches(lo, hi, affine));
  bool anyCut = false;
  for (const auto& [i, j, k] : s.grid->activeCells())
    anyCut = anyCut || s.grid->status(i, j, k) == fcm::CellStatus::Cut;
  REQUIRE(anyCut);
  fcm::ElasticField field(*s.grid, kSteel, s.u);

  // with beta = 1e14 the machine-precision noise of the penalty terms is
  // amplified through the low-energy fictitious modes of the cut cells, so
  // the reproduction floor is coarser than on a body-fitted block
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ux(0.3, 7.0), uy(0.3, 3.7);
  double uScale = 0.0, maxErr = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 x(ux(rng), uy(rng), uy(rng));
    const Vec3 exact = affine(x);
    uScale = std::max(uScale, exact.norm());
    maxErr = std::max(maxErr, (field.evaluate(x).u - exact).norm());
  }
  CHECK(maxErr < 1e-2 * uScale);
}

TEST_CASE("neumann load resultant equals traction times area") {
  Domain d(ImplicitShape::box(Vec3(0, 0, 0), Vec3(4, 2, 2)), kSteel);
  fcm::GridParams gp;
  gp.resolution = {4, 2, 2};
  gp.p = 3;
  fcm::CellGrid grid(d, gp);

  const Vec3 traction(1.5, -2.0, 0.25);  // MPa
  auto patch = fcm::SurfacePatch::rectangle(Vec3(4, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2));
  const Eigen::VectorXd f =
      fcm::neumann_load(grid, patch, [&](const Vec3&) { return traction; });

  Vec3 resultant = Vec3::Zero();
  // nodal + internal modes: the resultant is sum over scalar dofs times the
  // partition-of-unity property of the basis
  for (int i = 0; i < grid.numScalarDofs(); ++i)
    for (int a = 0; a < 3; ++a) resultant[a] += f[3 * i + a];
  // internal modes integrate to nonzero values individually but the affine
  // consistency of the load gives the exact resultant through the nodal part;
  // verify with the weak form instead: f . u_rigid = integral t . u_rigid
  // for the rigid translation interpolant (all nodal dofs = 1).
  // The basis is not a partition of unity across internal modes, so build
  // the interpolant of the constant field directly.
  (void)resultant;

  for (int a = 0; a < 3; ++a) {
    // coefficients of the constant unit field in direction a: nodal scalar
    // modes carry 1, internal modes 0. Nodal scalar dofs are exactly those
    // appearing as corner modes of some cell.
    Eigen::VectorXd ua = Eigen::VectorXd::Zero(grid.numDofs());
    const int p = grid.degree();
    auto corner = [p](int i, int j, int k) { return (i * (p + 1) + j) * (p + 1) + k; };
    for (int c = 0; c < grid.numActiveCells(); ++c) {
      const int* dofs = grid.cellScalarDofs(c);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) ua[3 * dofs[corner(i, j, k)] + a] = 1.0;
    }
    CHECK(f.dot(ua) == doctest::Approx(traction[a] * 4.0).epsilon(1e-10));
  }
}

TEST_CASE("indicator exponent barely perturbs the solution on a cut model") {
  // cylinder along x, fully cut in the cross-section plane
  auto makeSolved = [&](int alphaExp) {
    Domain d(ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(10, 0, 0), 3.0), kSteel, alphaExp);
    fcm::GridParams gp;
    gp.resolution = {5, 4, 4};
    gp.p = 2;
    auto fixed = fcm::SurfacePatch::disk(Vec3(0, 0, 0), Vec3(-1, 0, 0), 3.0);
    auto loaded = fcm::SurfacePatch::disk(Vec3(10, 0, 0), Vec3(1, 0, 0), 3.0);
    return solveSmall(d, gp, 3,
                      {{fixed, [](const Vec3&) { return Vec3::Zero().eval(); }}},
                      {{loaded, [](const Vec3&) { return Vec3(2.0, 0.5, 0.0); }}});
  };

  const Solved s8 = makeSolved(8);
  const Solved s10 = makeSolved(10);
  fcm::ElasticField f8(*s8.grid, kSteel, s8.u);
  fcm::ElasticField f10(*s10.grid, kSteel, s10.u);

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ax(0.5, 9.5), rad(-1.8, 1.8);
  double maxRel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 x(ax(rng), rad(rng), rad(rng));
    const Vec3 a = f8.evaluate(x).u, b = f10.evaluate(x).u;
    if (b.norm() > 1e-12) maxRel = std::max(maxRel, (a - b).norm() / b.norm());
  }
  CHECK(maxRel < 1e-4);
}

TEST_CASE("factorization refuses an indefinite matrix and reports residuals") {
  fcm::SparseSym bad(2, 2);
  std::vector<Eigen::Triplet<double>> t{{0, 0, 1.0}, {1, 1, -1.0}};
  bad.setFromTriplets(t.begin(), t.end());
  CHECK_THROWS(fcm::Factorization(std::move(bad)));

  fcm::SparseSym good(2, 2);
  std::vector<Eigen::Triplet<double>> g{{0, 0, 4.0}, {1, 0, 1.0}, {1, 1, 3.0}};
  good.setFromTriplets(g.begin(), g.end());
  fcm::Factorization fact(std::move(good));
  Eigen::VectorXd rhs(2);
  rhs << 1.0, 2.0;
  const Eigen::VectorXd x = fact.solve(rhs);
  CHECK(x[0] == doctest::Approx((3.0 - 2.0) / 11.0).epsilon(1e-12));
  CHECK(fact.lastResidual() < 1e-12);
}
