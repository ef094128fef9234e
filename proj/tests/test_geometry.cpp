#include <doctest.h>

#include <random>

#include "framecell/geometry.hpp"
#include "helpers.hpp"

using namespace framecell;

TEST_CASE("triangle basics") {
  Triangle t{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)};
  CHECK(t.area() == doctest::Approx(2.0));
  CHECK(t.unitNormal().isApprox(Vec3(0, 0, 1)));
  CHECK(t.centroid().isApprox(Vec3(2.0 / 3, 2.0 / 3, 0)));
}

TEST_CASE("implicit primitives membership") {
  auto sphere = ImplicitShape::sphere(Vec3(1, 0, 0), 2.0);
  CHECK(sphere.contains(Vec3(1, 0, 0)));
  CHECK(sphere.contains(Vec3(3, 0, 0)));  // boundary counts as inside
  CHECK_FALSE(sphere.contains(Vec3(3.001, 0, 0)));

  auto cyl = ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(10, 0, 0), 1.0);
  CHECK(cyl.contains(Vec3(5, 0.999, 0)));
  CHECK_FALSE(cyl.contains(Vec3(5, 1.001, 0)));
  CHECK_FALSE(cyl.contains(Vec3(-0.001, 0, 0)));
  CHECK(cyl.contains(Vec3(10, 0, 0)));

  auto tube = ImplicitShape::hollowCylinder(Vec3(0, 0, 0), Vec3(4, 0, 0), 1.0, 2.0);
  CHECK(tube.contains(Vec3(2, 1.5, 0)));
  CHECK_FALSE(tube.contains(Vec3(2, 0.5, 0)));  // bore
  CHECK_FALSE(tube.contains(Vec3(2, 2.5, 0)));

  auto box = ImplicitShape::box(Vec3(0, 0, 0), Vec3(1, 2, 3));
  CHECK(box.contains(Vec3(0.5, 1, 1.5)));
  CHECK(box.contains(Vec3(1, 2, 3)));
  CHECK_FALSE(box.contains(Vec3(1.01, 1, 1)));

  auto half = ImplicitShape::halfSpace(Vec3(0, 0, 0), Vec3(1, 0, 0));
  CHECK(half.contains(Vec3(-5, 100, 3)));
  CHECK_FALSE(half.contains(Vec3(0.1, 0, 0)));
}

TEST_CASE("implicit boolean algebra") {
  auto a = ImplicitShape::sphere(Vec3(0, 0, 0), 1.0);
  auto b = ImplicitShape::sphere(Vec3(1.5, 0, 0), 1.0);

  auto u = a.unite(b);
  CHECK(u.contains(Vec3(-0.9, 0, 0)));
  CHECK(u.contains(Vec3(2.3, 0, 0)));
  CHECK(u.contains(Vec3(0.75, 0, 0)));

  auto i = a.intersect(b);
  CHECK(i.contains(Vec3(0.75, 0, 0)));
  CHECK_FALSE(i.contains(Vec3(-0.5, 0, 0)));

  auto d = a.subtract(b);
  CHECK(d.contains(Vec3(-0.5, 0, 0)));
  CHECK_FALSE(d.contains(Vec3(0.75, 0, 0)));

  const Box bb = u.boundingBox();
  CHECK(bb.lo.x() <= -1.0);
  CHECK(bb.hi.x() >= 2.5);
  CHECK(bb.hi.y() >= 1.0);
}

TEST_CASE("triangle surface containment and watertightness") {
  TriangleSurface cube(framecell::testing::boxTriangles(Vec3(0, 0, 0), Vec3(1, 1, 1)));
  CHECK(cube.watertight());
  CHECK(cube.contains(Vec3(0.5, 0.5, 0.5)));
  CHECK(cube.contains(Vec3(0.001, 0.001, 0.001)));
  CHECK_FALSE(cube.contains(Vec3(1.5, 0.5, 0.5)));
  CHECK_FALSE(cube.contains(Vec3(-0.001, 0.5, 0.5)));
  // points on the surface count as inside
  CHECK(cube.contains(Vec3(1.0, 0.5, 0.5)));
  CHECK(cube.contains(Vec3(0.0, 0.0, 0.0)));

  // ray through an edge-heavy direction still classifies consistently
  for (int k = 0; k < 20; ++k) {
    const double s = k / 19.0;
    CHECK(cube.contains(Vec3(s * 0.999 + 0.0005, s * 0.999 + 0.0005, 0.5)));
  }

  auto tris = framecell::testing::boxTriangles(Vec3(0, 0, 0), Vec3(1, 1, 1));
  tris.pop_back();  // open the surface
  TriangleSurface open(std::move(tris));
  CHECK_FALSE(open.watertight());
  CHECK(open.contains(Vec3(0.5, 0.5, 0.25)));  // ray-cast fallback still answers
}

TEST_CASE("domain indicator") {
  Material steel(2.0e5, 0.3);
  Domain d(ImplicitShape::sphere(Vec3(0, 0, 0), 1.0), steel, 10);
  CHECK(d.indicator(Vec3(0, 0, 0)) == 1.0);
  CHECK(d.indicator(Vec3(2, 0, 0)) == doctest::Approx(1e-10));
  CHECK(d.alphaExponent() == 10);
  CHECK_FALSE(d.nonWatertight());

  Domain d8(ImplicitShape::sphere(Vec3(0, 0, 0), 1.0), steel, 8);
  CHECK(d8.indicator(Vec3(2, 0, 0)) == doctest::Approx(1e-8));
}

TEST_CASE("section frame is a deterministic right-handed triad") {
  std::mt19937 rng(7);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    InterfaceSection s;
    s.centroid = Vec3(n(rng), n(rng), n(rng));
    s.normal = Vec3(n(rng), n(rng), n(rng)).normalized();
    const SectionFrame f = section_frame(s);

    CHECK(f.origin.isApprox(s.centroid));
    CHECK(f.triad.col(0).isApprox(s.normal, 1e-12));
    CHECK((f.triad * f.triad.transpose()).isApprox(Mat3::Identity(), 1e-12));
    CHECK(f.triad.determinant() == doctest::Approx(1.0));

    // in-plane axes are orthogonal to the normal
    CHECK(std::abs(f.triad.col(1).dot(s.normal)) < 1e-12);
    CHECK(std::abs(f.triad.col(2).dot(s.normal)) < 1e-12);

    // repeated evaluation is bitwise identical
    const SectionFrame g = section_frame(s);
    CHECK(g.triad == f.triad);
  }

  InterfaceSection ax;
  ax.normal = Vec3(1, 0, 0);
  const SectionFrame f = section_frame(ax);
  CHECK(f.triad.col(1).isApprox(Vec3(0, 1, 0)));
  CHECK(f.triad.col(2).isApprox(Vec3(0, 0, 1)));
}
