#include <doctest.h>

#include <set>

#include "framecell/fcm/grid.hpp"

using namespace framecell;

namespace {
const Material kSteel(2.0e5, 0.3);

Domain boxDomain(const Vec3& lo, const Vec3& hi) {
  return Domain(ImplicitShape::box(lo, hi), kSteel);
}
}  // namespace

TEST_CASE("cell classification for a sphere") {
  Domain d(ImplicitShape::sphere(Vec3(0, 0, 0), 1.0), kSteel);
  fcm::GridParams gp;
  gp.resolution = {8, 8, 8};
  gp.p = 2;
  fcm::CellGrid grid(d, gp);

  CHECK(grid.box().lo.isApprox(Vec3(-1, -1, -1)));
  CHECK(grid.box().hi.isApprox(Vec3(1, 1, 1)));

  // corner cells are fully outside, center cells fully inside
  CHECK(grid.status(0, 0, 0) == fcm::CellStatus::Outside);
  CHECK(grid.status(3, 3, 3) == fcm::CellStatus::Inside);
  CHECK(grid.status(0, 3, 3) == fcm::CellStatus::Cut);  // touches the equator
  CHECK(grid.numActiveCells() < 8 * 8 * 8);
  CHECK(grid.numActiveCells() > 0);
  CHECK(grid.activeIndex(0, 0, 0) == -1);
}

TEST_CASE("scalar dof count matches the closed form on a full box") {
  // when every cell is active the conforming space has
  // prod(n_d * p + 1) scalar modes
  for (int p : {1, 2, 3}) {
    fcm::GridParams gp;
    gp.resolution = {3, 2, 4};
    gp.p = p;
    fcm::CellGrid grid(boxDomain(Vec3(0, 0, 0), Vec3(3, 2, 4)), gp);
    CHECK(grid.numActiveCells() == 3 * 2 * 4);
    CHECK(grid.numScalarDofs() == (3 * p + 1) * (2 * p + 1) * (4 * p + 1));
    CHECK(grid.numDofs() == 3 * grid.numScalarDofs());
  }
}

TEST_CASE("neighboring cells share face dofs") {
  const int p = 3;
  fcm::GridParams gp;
  gp.resolution = {2, 1, 1};
  gp.p = p;
  fcm::CellGrid grid(boxDomain(Vec3(0, 0, 0), Vec3(2, 1, 1)), gp);

  const int* left = grid.cellScalarDofs(grid.activeIndex(0, 0, 0));
  const int* right = grid.cellScalarDofs(grid.activeIndex(1, 0, 0));

  auto flat = [p](int a, int b, int c) { return (a * (p + 1) + b) * (p + 1) + c; };
  // the x=+1 plane of the left cell is the x=-1 plane of the right cell:
  // 1d mode index 1 is the right nodal mode, 0 the left one
  for (int b = 0; b <= p; ++b)
    for (int c = 0; c <= p; ++c) CHECK(left[flat(1, b, c)] == right[flat(0, b, c)]);

  // no other dofs coincide
  std::set<int> shared;
  for (int b = 0; b <= p; ++b)
    for (int c = 0; c <= p; ++c) shared.insert(left[flat(1, b, c)]);
  for (int a : {0, 2, 3})
    for (int b = 0; b <= p; ++b)
      for (int c = 0; c <= p; ++c) CHECK(shared.count(right[flat(a == 0 ? 1 : a, b, c)]) == 0);
}

TEST_CASE("dof numbering is independent of which cells are active") {
  // carving cells out of the domain must not renumber surviving entities
  // inconsistently: shared entities still match across the remaining cells
  fcm::GridParams gp;
  gp.resolution = {3, 3, 1};
  gp.p = 2;
  Domain lShape(
      ImplicitShape::box(Vec3(0, 0, 0), Vec3(3, 1, 1)).unite(ImplicitShape::box(Vec3(0, 0, 0), Vec3(1, 3, 1))),
      kSteel);
  fcm::CellGrid grid(lShape, gp);
  CHECK(grid.numActiveCells() >= 5);

  const int* a = grid.cellScalarDofs(grid.activeIndex(0, 0, 0));
  const int* b = grid.cellScalarDofs(grid.activeIndex(1, 0, 0));
  auto flat = [](int i, int j, int k) { return (i * 3 + j) * 3 + k; };
  // 1d mode index 1 is the right nodal mode, 0 the left one
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK(a[flat(1, j, k)] == b[flat(0, j, k)]);
}

TEST_CASE("locate maps points and prefers the first active cell on shared faces") {
  fcm::GridParams gp;
  gp.resolution = {2, 2, 2};
  gp.p = 2;
  fcm::CellGrid grid(boxDomain(Vec3(0, 0, 0), Vec3(2, 2, 2)), gp);

  std::array<int, 3> cell;
  Vec3 xi;
  REQUIRE(grid.locate(Vec3(0.5, 0.5, 0.5), cell, xi));
  CHECK(cell == std::array<int, 3>{0, 0, 0});
  CHECK(xi.isApprox(Vec3(0, 0, 0), 1e-12));

  // point exactly on the interior gridline
  REQUIRE(grid.locate(Vec3(1.0, 0.5, 0.5), cell, xi));
  CHECK(cell == std::array<int, 3>{0, 0, 0});
  CHECK(xi.x() == doctest::Approx(1.0));

  // domain boundary corner
  REQUIRE(grid.locate(Vec3(2.0, 2.0, 2.0), cell, xi));
  CHECK(cell == std::array<int, 3>{1, 1, 1});

  CHECK_FALSE(grid.locate(Vec3(2.5, 0.5, 0.5), cell, xi));
}
