#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "framecell/material.hpp"
#include "framecell/types.hpp"

namespace framecell {

struct Triangle {
  Vec3 v0, v1, v2;

  Vec3 unitNormal() const;
  double area() const { return 0.5 * (v1 - v0).cross(v2 - v0).norm(); }
  Vec3 centroid() const { return (v0 + v1 + v2) / 3.0; }
};

/// Triangulated boundary surface of a node geometry (typically from STL).
/// Immutable after construction; concurrent queries are safe.
class TriangleSurface {
 public:
  explicit TriangleSurface(std::vector<Triangle> triangles);

  const std::vector<Triangle>& triangles() const { return tris_; }
  const Box& boundingBox() const { return bbox_; }
  bool watertight() const { return watertight_; }

  /// Parity ray cast. Points on the surface count as inside. For
  /// non-watertight surfaces the result is still computed but flagged.
  bool contains(const Vec3& p) const;

 private:
  std::vector<Triangle> tris_;
  Box bbox_;
  bool watertight_ = false;
};

/// Closed algebra of implicit primitives under union/intersection/difference.
/// Membership is total and deterministic; boundary points count as inside.
class ImplicitShape {
 public:
  static ImplicitShape sphere(const Vec3& center, double radius);
  /// Finite solid cylinder between the two axis endpoints.
  static ImplicitShape cylinder(const Vec3& a, const Vec3& b, double radius);
  static ImplicitShape hollowCylinder(const Vec3& a, const Vec3& b, double rIn, double rOut);
  static ImplicitShape box(const Vec3& lo, const Vec3& hi);
  /// Points with (p - point) . normal <= 0 are inside.
  static ImplicitShape halfSpace(const Vec3& point, const Vec3& outwardNormal);

  ImplicitShape unite(const ImplicitShape& other) const;
  ImplicitShape intersect(const ImplicitShape& other) const;
  ImplicitShape subtract(const ImplicitShape& other) const;

  bool contains(const Vec3& p) const;

  /// Bounding box of the shape. Half-spaces and subtracted operands are
  /// bounded by their partners; a lone half-space gets a large finite box.
  Box boundingBox() const;

  struct Node;  // opaque expression tree

 private:
  explicit ImplicitShape(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

enum class PointClass { Inside, Outside };

/// Physical geometry of one structural node plus the indicator exponent.
class Domain {
 public:
  Domain(TriangleSurface surface, Material material, int alphaExponent = 10);
  Domain(ImplicitShape shape, Material material, int alphaExponent = 10);

  PointClass classify(const Vec3& p) const;
  bool inside(const Vec3& p) const { return classify(p) == PointClass::Inside; }

  /// Indicator: 1 inside the physical domain, 10^-k outside.
  double indicator(const Vec3& p) const { return inside(p) ? 1.0 : alphaOutside_; }

  const Box& boundingBox() const { return bbox_; }
  int alphaExponent() const { return alphaExponent_; }
  const Material& material() const { return material_; }

  /// True when classification relies on the ray-cast fallback of a
  /// non-watertight surface.
  bool nonWatertight() const;
  const TriangleSurface* surface() const;

 private:
  std::variant<TriangleSurface, ImplicitShape> geometry_;
  Material material_;
  int alphaExponent_;
  double alphaOutside_;
  Box bbox_;
};

/// One beam-to-node interface: a circular disk or an explicit triangle patch
/// on the node boundary. The 6 coupled DOFs are in global axes, ordered
/// (ux, uy, uz, rx, ry, rz).
struct InterfaceSection {
  Vec3 centroid{Vec3::Zero()};
  Vec3 normal{Vec3::UnitX()};
  std::variant<double, std::vector<Triangle>> shape{30.0};  // disk radius or patch
  int globalNodeId = -1;

  bool isDisk() const { return std::holds_alternative<double>(shape); }
  double diskRadius() const { return std::get<double>(shape); }
};

struct SectionFrame {
  Vec3 origin;
  Mat3 triad;  // columns: normal, first in-plane axis, second in-plane axis
};

/// Deterministic orthonormal right-handed triad at the section centroid.
/// The first in-plane axis is the projection of the global axis least
/// aligned with the normal.
SectionFrame section_frame(const InterfaceSection& s);

}  // namespace framecell
