#include <doctest.h>

#include <cstring>
#include <sstream>

#include "framecell/stl_io.hpp"
#include "helpers.hpp"

using namespace framecell;

namespace {

std::string textStl(const std::vector<Triangle>& tris, const std::string& name = "part") {
  std::ostringstream out;
  out << "solid " << name << "\n";
  for (const Triangle& t : tris) {
    const Vec3 n = t.unitNormal();
    out << "  facet normal " << n.x() << " " << n.y() << " " << n.z() << "\n";
    out << "    outer loop\n";
    for (const Vec3* v : {&t.v0, &t.v1, &t.v2})
      out << "      vertex " << v->x() << " " << v->y() << " " << v->z() << "\n";
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid " << name << "\n";
  return out.str();
}

std::string binaryStl(const std::vector<Triangle>& tris) {
  std::string out(80, '\0');
  auto put32 = [&out](uint32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); };
  auto putf = [&out](float v) { out.append(reinterpret_cast<const char*>(&v), 4); };
  put32(uint32_t(tris.size()));
  for (const Triangle& t : tris) {
    const Vec3 n = t.unitNormal();
    for (int d = 0; d < 3; ++d) putf(float(n[d]));
    for (const Vec3* v : {&t.v0, &t.v1, &t.v2})
      for (int d = 0; d < 3; ++d) putf(float((*v)[d]));
    out.append(2, '\0');  // attribute byte count
  }
  return out;
}

}  // namespace

TEST_CASE("text stl round trip") {
  const auto tris = framecell::testing::boxTriangles(Vec3(0, 0, 0), Vec3(1, 2, 3));
  TriangleSurface s = load_triangle_surface(textStl(tris));
  REQUIRE(s.triangles().size() == tris.size());
  CHECK(s.watertight());
  CHECK(s.boundingBox().lo.isApprox(Vec3(0, 0, 0)));
  CHECK(s.boundingBox().hi.isApprox(Vec3(1, 2, 3)));
  for (size_t i = 0; i < tris.size(); ++i) CHECK(s.triangles()[i].v0.isApprox(tris[i].v0));
}

TEST_CASE("binary stl round trip preserves float bits") {
  const auto tris = framecell::testing::boxTriangles(Vec3(-0.25, 0.5, 1.125), Vec3(2.5, 3.0, 4.75));
  const std::string bytes = binaryStl(tris);
  TriangleSurface s = load_triangle_surface(bytes);
  REQUIRE(s.triangles().size() == tris.size());
  // all chosen coordinates are exactly representable in binary32
  for (size_t i = 0; i < tris.size(); ++i) {
    CHECK(s.triangles()[i].v0 == tris[i].v0);
    CHECK(s.triangles()[i].v1 == tris[i].v1);
    CHECK(s.triangles()[i].v2 == tris[i].v2);
  }
}

TEST_CASE("binary stl with 'solid' header is sniffed as binary") {
  const auto tris = framecell::testing::boxTriangles(Vec3(0, 0, 0), Vec3(1, 1, 1));
  std::string bytes = binaryStl(tris);
  std::memcpy(bytes.data(), "solid binary-made-by-cad", 24);
  TriangleSurface s = load_triangle_surface(bytes);
  CHECK(s.triangles().size() == tris.size());
}

TEST_CASE("stl error paths name byte offsets") {
  CHECK_THROWS_AS(load_triangle_surface(""), StlParseError);

  const auto tris = framecell::testing::boxTriangles(Vec3(0, 0, 0), Vec3(1, 1, 1));
  std::string bytes = binaryStl(tris);
  bytes.resize(bytes.size() - 30);  // truncate mid-record
  try {
    load_triangle_surface(bytes);
    FAIL("expected StlParseError");
  } catch (const StlParseError& e) {
    CHECK(e.byteOffset() > 80);
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }

  // zero triangles is an error in both formats
  std::string empty(84, '\0');
  CHECK_THROWS_AS(load_triangle_surface(empty), StlParseError);
  CHECK_THROWS_AS(load_triangle_surface("solid a\nendsolid a\n"), StlParseError);
}
