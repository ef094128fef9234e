#include "framecell/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <stdexcept>

namespace framecell {

Vec3 Triangle::unitNormal() const {
  Vec3 n = (v1 - v0).cross(v2 - v0);
  double len = n.norm();
  if (len <= 0.0) throw std::invalid_argument("Triangle: degenerate (zero area)");
  return n / len;
}

namespace {

constexpr double kMinTriangleArea = 1e-12;  // mm^2
constexpr double kOnSurfaceTol = 1e-9;      // mm

struct VertexKey {
  uint64_t x, y, z;
  bool operator<(const VertexKey& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

uint64_t bits(double v) {
  uint64_t b;
  static_assert(sizeof(b) == sizeof(v));
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

VertexKey keyOf(const Vec3& v) { return {bits(v.x()), bits(v.y()), bits(v.z())}; }

// Squared distance from p to triangle (Ericson, Real-Time Collision Detection).
double pointTriangleDist2(const Vec3& p, const Triangle& t) {
  const Vec3 ab = t.v1 - t.v0, ac = t.v2 - t.v0, ap = p - t.v0;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - t.v0).squaredNorm();

  const Vec3 bp = p - t.v1;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - t.v1).squaredNorm();

  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double v = d1 / (d1 - d3);
    return (p - (t.v0 + v * ab)).squaredNorm();
  }

  const Vec3 cp = p - t.v2;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - t.v2).squaredNorm();

  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double w = d2 / (d2 - d6);
    return (p - (t.v0 + w * ac)).squaredNorm();
  }

  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (t.v1 + w * (t.v2 - t.v1))).squaredNorm();
  }

  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return (p - (t.v0 + ab * v + ac * w)).squaredNorm();
}

enum class Hit { Miss, Cross, Degenerate };

// Moller-Trumbore with conservative degeneracy reporting: grazing or
// edge-touching hits force a ray retry instead of a wrong parity.
Hit rayTriangle(const Vec3& origin, const Vec3& dir, const Triangle& t) {
  constexpr double eps = 1e-12;
  const Vec3 e1 = t.v1 - t.v0, e2 = t.v2 - t.v0;
  const Vec3 pv = dir.cross(e2);
  double det = e1.dot(pv);
  double scale = e1.norm() * e2.norm();
  if (std::abs(det) < 1e-14 * scale) {
    // Parallel ray; only degenerate if the ray can actually graze the plane.
    if (std::abs((origin - t.v0).dot(e1.cross(e2).normalized())) < kOnSurfaceTol)
      return Hit::Degenerate;
    return Hit::Miss;
  }
  double invDet = 1.0 / det;
  const Vec3 tv = origin - t.v0;
  double u = tv.dot(pv) * invDet;
  if (u < -eps || u > 1.0 + eps) return Hit::Miss;
  const Vec3 qv = tv.cross(e1);
  double v = dir.dot(qv) * invDet;
  if (v < -eps || u + v > 1.0 + eps) return Hit::Miss;
  double tt = e2.dot(qv) * invDet;
  if (tt < -eps) return Hit::Miss;
  bool nearEdge = u < eps || v < eps || u + v > 1.0 - eps || tt < eps;
  return nearEdge ? Hit::Degenerate : Hit::Cross;
}

}  // namespace

TriangleSurface::TriangleSurface(std::vector<Triangle> triangles) : tris_(std::move(triangles)) {
  if (tris_.empty()) throw std::invalid_argument("TriangleSurface: empty geometry");
  bbox_.lo = tris_[0].v0;
  bbox_.hi = tris_[0].v0;

  std::map<std::pair<VertexKey, VertexKey>, int> edgeUse;
  for (const Triangle& t : tris_) {
    if (t.area() <= kMinTriangleArea)
      throw std::invalid_argument("TriangleSurface: triangle below minimum area");
    for (const Vec3* v : {&t.v0, &t.v1, &t.v2}) bbox_.extend(*v);

    const VertexKey k0 = keyOf(t.v0), k1 = keyOf(t.v1), k2 = keyOf(t.v2);
    auto addEdge = [&edgeUse](VertexKey a, VertexKey b) {
      if (b < a) std::swap(a, b);
      edgeUse[{a, b}]++;
    };
    addEdge(k0, k1);
    addEdge(k1, k2);
    addEdge(k2, k0);
  }
  watertight_ = true;
  for (const auto& [edge, count] : edgeUse) {
    if (count != 2) {
      watertight_ = false;
      break;
    }
  }
}

bool TriangleSurface::contains(const Vec3& p) const {
  if (!bbox_.inflated(kOnSurfaceTol).contains(p)) return false;

  for (const Triangle& t : tris_)
    if (pointTriangleDist2(p, t) < kOnSurfaceTol * kOnSurfaceTol) return true;

  // Deterministic retry directions for degenerate hits.
  static const Vec3 dirs[] = {
      {1.0, 0.0, 0.0},           {0.0, 1.0, 0.0},           {0.0, 0.0, 1.0},
      {0.577350, 0.211324, 0.788675}, {0.262113, 0.874313, 0.408241},
      {0.918559, 0.317797, 0.233891}, {0.412318, 0.561213, 0.717219},
      {0.705931, 0.105993, 0.700279}};

  for (const Vec3& d : dirs) {
    int crossings = 0;
    bool degenerate = false;
    for (const Triangle& t : tris_) {
      switch (rayTriangle(p, d, t)) {
        case Hit::Cross: crossings++; break;
        case Hit::Degenerate: degenerate = true; break;
        case Hit::Miss: break;
      }
      if (degenerate) break;
    }
    if (!degenerate) return (crossings % 2) == 1;
  }
  // Every direction grazed some triangle; p is effectively on the surface.
  return true;
}

// ---------------------------------------------------------------------------
// ImplicitShape

struct ImplicitShape::Node {
  enum class Kind { Sphere, Cylinder, HollowCylinder, Box, HalfSpace, Union, Intersection, Difference };
  Kind kind;

  // primitive data
  Vec3 a{Vec3::Zero()}, b{Vec3::Zero()};
  double r0 = 0.0, r1 = 0.0;

  std::shared_ptr<const Node> left, right;
};

namespace {

using ShapeNode = ImplicitShape::Node;

bool nodeContains(const ShapeNode& n, const Vec3& p) {
  switch (n.kind) {
    case ShapeNode::Kind::Sphere:
      return (p - n.a).squaredNorm() <= n.r0 * n.r0;
    case ShapeNode::Kind::Cylinder:
    case ShapeNode::Kind::HollowCylinder: {
      const Vec3 axis = n.b - n.a;
      const double len2 = axis.squaredNorm();
      const double s = (p - n.a).dot(axis);
      if (s < 0.0 || s > len2) return false;
      const double rad2 = ((p - n.a) - axis * (s / len2)).squaredNorm();
      if (rad2 > n.r1 * n.r1) return false;
      return n.kind == ShapeNode::Kind::Cylinder || rad2 >= n.r0 * n.r0;
    }
    case ShapeNode::Kind::Box:
      return Box{n.a, n.b}.contains(p);
    case ShapeNode::Kind::HalfSpace:
      return (p - n.a).dot(n.b) <= 0.0;
    case ShapeNode::Kind::Union:
      return nodeContains(*n.left, p) || nodeContains(*n.right, p);
    case ShapeNode::Kind::Intersection:
      return nodeContains(*n.left, p) && nodeContains(*n.right, p);
    case ShapeNode::Kind::Difference:
      return nodeContains(*n.left, p) && !nodeContains(*n.right, p);
  }
  return false;
}

Box nodeBox(const ShapeNode& n) {
  constexpr double kHuge = 1e9;
  switch (n.kind) {
    case ShapeNode::Kind::Sphere:
      return {n.a.array() - n.r0, n.a.array() + n.r0};
    case ShapeNode::Kind::Cylinder:
    case ShapeNode::Kind::HollowCylinder: {
      Box box{n.a.cwiseMin(n.b), n.a.cwiseMax(n.b)};
      return box.inflated(n.r1);
    }
    case ShapeNode::Kind::Box:
      return {n.a, n.b};
    case ShapeNode::Kind::HalfSpace:
      return {Vec3::Constant(-kHuge), Vec3::Constant(kHuge)};
    case ShapeNode::Kind::Union: {
      Box l = nodeBox(*n.left), r = nodeBox(*n.right);
      l.extend(r.lo);
      l.extend(r.hi);
      return l;
    }
    case ShapeNode::Kind::Intersection: {
      Box l = nodeBox(*n.left), r = nodeBox(*n.right);
      return {l.lo.cwiseMax(r.lo), l.hi.cwiseMin(r.hi)};
    }
    case ShapeNode::Kind::Difference:
      return nodeBox(*n.left);
  }
  return {};
}

std::shared_ptr<const ShapeNode> makePrimitive(ShapeNode::Kind kind, const Vec3& a, const Vec3& b,
                                               double r0, double r1) {
  auto n = std::make_shared<ShapeNode>();
  n->kind = kind;
  n->a = a;
  n->b = b;
  n->r0 = r0;
  n->r1 = r1;
  return n;
}

}  // namespace

ImplicitShape ImplicitShape::sphere(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere: radius must be positive");
  return ImplicitShape(makePrimitive(Node::Kind::Sphere, center, Vec3::Zero(), radius, 0.0));
}

ImplicitShape ImplicitShape::cylinder(const Vec3& a, const Vec3& b, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cylinder: radius must be positive");
  if ((b - a).squaredNorm() <= 0.0) throw std::invalid_argument("cylinder: zero-length axis");
  return ImplicitShape(makePrimitive(Node::Kind::Cylinder, a, b, 0.0, radius));
}

ImplicitShape ImplicitShape::hollowCylinder(const Vec3& a, const Vec3& b, double rIn, double rOut) {
  if (!(rIn > 0.0 && rOut > rIn)) throw std::invalid_argument("hollowCylinder: need 0 < rIn < rOut");
  if ((b - a).squaredNorm() <= 0.0) throw std::invalid_argument("hollowCylinder: zero-length axis");
  return ImplicitShape(makePrimitive(Node::Kind::HollowCylinder, a, b, rIn, rOut));
}

ImplicitShape ImplicitShape::box(const Vec3& lo, const Vec3& hi) {
  if (!((hi - lo).array() > 0.0).all()) throw std::invalid_argument("box: hi must exceed lo");
  return ImplicitShape(makePrimitive(Node::Kind::Box, lo, hi, 0.0, 0.0));
}

ImplicitShape ImplicitShape::halfSpace(const Vec3& point, const Vec3& outwardNormal) {
  if (outwardNormal.squaredNorm() <= 0.0) throw std::invalid_argument("halfSpace: zero normal");
  return ImplicitShape(makePrimitive(Node::Kind::HalfSpace, point, outwardNormal, 0.0, 0.0));
}

namespace {
std::shared_ptr<const ShapeNode> combine(ShapeNode::Kind kind, std::shared_ptr<const ShapeNode> l,
                                         std::shared_ptr<const ShapeNode> r) {
  auto n = std::make_shared<ShapeNode>();
  n->kind = kind;
  n->left = std::move(l);
  n->right = std::move(r);
  return n;
}
}  // namespace

ImplicitShape ImplicitShape::unite(const ImplicitShape& o) const {
  return ImplicitShape(combine(Node::Kind::Union, root_, o.root_));
}
ImplicitShape ImplicitShape::intersect(const ImplicitShape& o) const {
  return ImplicitShape(combine(Node::Kind::Intersection, root_, o.root_));
}
ImplicitShape ImplicitShape::subtract(const ImplicitShape& o) const {
  return ImplicitShape(combine(Node::Kind::Difference, root_, o.root_));
}

bool ImplicitShape::contains(const Vec3& p) const { return nodeContains(*root_, p); }
Box ImplicitShape::boundingBox() const { return nodeBox(*root_); }

// ---------------------------------------------------------------------------
// Domain

namespace {
int checkAlphaExponent(int k) {
  if (k <= 0) throw std::invalid_argument("Domain: alphaExponent must be positive");
  return k;
}
}  // namespace

Domain::Domain(TriangleSurface surface, Material material, int alphaExponent)
    : geometry_(std::move(surface)),
      material_(material),
      alphaExponent_(checkAlphaExponent(alphaExponent)),
      alphaOutside_(std::pow(10.0, -alphaExponent)),
      bbox_(std::get<TriangleSurface>(geometry_).boundingBox()) {}

Domain::Domain(ImplicitShape shape, Material material, int alphaExponent)
    : geometry_(std::move(shape)),
      material_(material),
      alphaExponent_(checkAlphaExponent(alphaExponent)),
      alphaOutside_(std::pow(10.0, -alphaExponent)),
      bbox_(std::get<ImplicitShape>(geometry_).boundingBox()) {}

PointClass Domain::classify(const Vec3& p) const {
  bool in = std::visit([&p](const auto& g) { return g.contains(p); }, geometry_);
  return in ? PointClass::Inside : PointClass::Outside;
}

bool Domain::nonWatertight() const {
  const auto* s = std::get_if<TriangleSurface>(&geometry_);
  return s != nullptr && !s->watertight();
}

const TriangleSurface* Domain::surface() const { return std::get_if<TriangleSurface>(&geometry_); }

// ---------------------------------------------------------------------------

SectionFrame section_frame(const InterfaceSection& s) {
  const double len = s.normal.norm();
  if (std::abs(len - 1.0) > 1e-12)
    throw std::invalid_argument("section_frame: normal must have unit length");

  // Global axis least aligned with the normal (lowest index wins ties).
  int least = 0;
  double best = std::abs(s.normal.x());
  for (int i = 1; i < 3; ++i) {
    double a = std::abs(s.normal[i]);
    if (a < best - 1e-15) {
      best = a;
      least = i;
    }
  }
  Vec3 axis = Vec3::Unit(least);
  Vec3 t1 = (axis - s.normal * s.normal.dot(axis)).normalized();
  Vec3 t2 = s.normal.cross(t1);

  SectionFrame f;
  f.origin = s.centroid;
  f.triad.col(0) = s.normal;
  f.triad.col(1) = t1;
  f.triad.col(2) = t2;
  return f;
}

}  // namespace framecell
