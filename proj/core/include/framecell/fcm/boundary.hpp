#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "framecell/fcm/grid.hpp"

namespace framecell::fcm {

/// One surface quadrature point: position and area weight.
struct SurfacePoint {
  Vec3 x;
  double weight;
};

/// Quadrature-ready surface region: a triangle patch or an analytic disk.
/// Triangles are subdivided until they fit a target spacing and integrated
/// with a 7-point degree-5 rule; disks use a polar Gauss/trapezoid grid
/// whose total weight is exactly the disk area.
class SurfacePatch {
 public:
  static SurfacePatch fromTriangles(std::vector<Triangle> tris);
  static SurfacePatch disk(const Vec3& center, const Vec3& unitNormal, double radius);
  static SurfacePatch rectangle(const Vec3& corner, const Vec3& edge1, const Vec3& edge2);

  std::vector<SurfacePoint> quadrature(double targetSpacing) const;

  double area() const;

 private:
  SurfacePatch() = default;
  std::vector<Triangle> tris_;
  bool isDisk_ = false;
  Vec3 center_{Vec3::Zero()}, normal_{Vec3::UnitX()};
  double radius_ = 0.0;
};

SurfacePatch patch_from_section(const InterfaceSection& s);

using FieldFn = std::function<Vec3(const Vec3&)>;

/// Penalty Dirichlet contributions: beta * int N^T N dGamma into the matrix
/// (lower triangle triplets) and beta * int N^T u_p dGamma into the vector.
/// Throws when no quadrature point lands in an active cell.
void penalty_dirichlet(const CellGrid& grid, const SurfacePatch& region, const FieldFn& prescribed,
                       double beta, std::vector<Eigen::Triplet<double>>& matrixLower,
                       Eigen::VectorXd& vector);

/// Penalty load vector only, for reuse of an already assembled penalty
/// matrix across prescribed fields on the same region.
void penalty_load(const CellGrid& grid, const SurfacePatch& region, const FieldFn& prescribed,
                  double beta, Eigen::VectorXd& vector);

/// Consistent Neumann load int N^T t dGamma.
Eigen::VectorXd neumann_load(const CellGrid& grid, const SurfacePatch& patch,
                             const FieldFn& traction);

}  // namespace framecell::fcm
