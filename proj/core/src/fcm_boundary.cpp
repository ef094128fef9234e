#include "framecell/fcm/boundary.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace framecell::fcm {

namespace {

// Degree-5 7-point triangle rule, barycentric coordinates and weights
// normalized to a unit-area triangle.
struct TriRulePoint {
  double l0, l1, l2, w;
};
constexpr double kA1 = 0.0597158717897698;
constexpr double kB1 = 0.4701420641051151;
constexpr double kA2 = 0.7974269853530873;
constexpr double kB2 = 0.1012865073234563;
constexpr TriRulePoint kTriRule[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kA1, kB1, kB1, 0.1323941527885062},
    {kB1, kA1, kB1, 0.1323941527885062},
    {kB1, kB1, kA1, 0.1323941527885062},
    {kA2, kB2, kB2, 0.1259391805448271},
    {kB2, kA2, kB2, 0.1259391805448271},
    {kB2, kB2, kA2, 0.1259391805448271}};

void triangleQuadrature(const Triangle& t, double targetSpacing, std::vector<SurfacePoint>& out) {
  const double maxEdge = std::max({(t.v1 - t.v0).norm(), (t.v2 - t.v1).norm(), (t.v0 - t.v2).norm()});
  if (maxEdge > targetSpacing) {
    const Vec3 m01 = 0.5 * (t.v0 + t.v1), m12 = 0.5 * (t.v1 + t.v2), m20 = 0.5 * (t.v2 + t.v0);
    triangleQuadrature({t.v0, m01, m20}, targetSpacing, out);
    triangleQuadrature({m01, t.v1, m12}, targetSpacing, out);
    triangleQuadrature({m20, m12, t.v2}, targetSpacing, out);
    triangleQuadrature({m01, m12, m20}, targetSpacing, out);
    return;
  }
  const double area = t.area();
  for (const TriRulePoint& q : kTriRule)
    out.push_back({q.l0 * t.v0 + q.l1 * t.v1 + q.l2 * t.v2, q.w * area});
}

}  // namespace

SurfacePatch SurfacePatch::fromTriangles(std::vector<Triangle> tris) {
  if (tris.empty()) throw std::invalid_argument("SurfacePatch: no triangles");
  SurfacePatch p;
  p.tris_ = std::move(tris);
  return p;
}

SurfacePatch SurfacePatch::disk(const Vec3& center, const Vec3& unitNormal, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("SurfacePatch::disk: radius must be positive");
  SurfacePatch p;
  p.isDisk_ = true;
  p.center_ = center;
  p.normal_ = unitNormal.normalized();
  p.radius_ = radius;
  return p;
}

SurfacePatch SurfacePatch::rectangle(const Vec3& corner, const Vec3& edge1, const Vec3& edge2) {
  return fromTriangles({{corner, corner + edge1, corner + edge1 + edge2},
                        {corner, corner + edge1 + edge2, corner + edge2}});
}

double SurfacePatch::area() const {
  if (isDisk_) return std::numbers::pi * radius_ * radius_;
  double a = 0.0;
  for (const Triangle& t : tris_) a += t.area();
  return a;
}

std::vector<SurfacePoint> SurfacePatch::quadrature(double targetSpacing) const {
  std::vector<SurfacePoint> out;
  if (!isDisk_) {
    for (const Triangle& t : tris_) triangleQuadrature(t, targetSpacing, out);
    return out;
  }

  // Polar grid: Gauss in radius, uniform in angle. The trapezoid rule is
  // spectrally accurate for the periodic direction and the total weight is
  // exactly pi r^2.
  InterfaceSection s;
  s.centroid = center_;
  s.normal = normal_;
  const Mat3 triad = section_frame(s).triad;
  const Vec3 t1 = triad.col(1), t2 = triad.col(2);

  const int nr = std::max(2, int(std::ceil(radius_ / targetSpacing)));
  const int na = std::max(8, int(std::ceil(2.0 * std::numbers::pi * radius_ / targetSpacing)));
  const GaussRule& rule = gauss_rule(std::min(nr, 32));
  const double dtheta = 2.0 * std::numbers::pi / na;

  for (int i = 0; i < int(rule.points.size()); ++i) {
    const double t = 0.5 * (rule.points[i] + 1.0);  // (0, 1)
    const double rho = radius_ * t;
    const double wr = 0.5 * rule.weights[i] * radius_ * radius_ * t;
    for (int m = 0; m < na; ++m) {
      const double theta = dtheta * (m + 0.5);
      out.push_back({center_ + rho * (std::cos(theta) * t1 + std::sin(theta) * t2), wr * dtheta});
    }
  }
  return out;
}

SurfacePatch patch_from_section(const InterfaceSection& s) {
  if (s.isDisk()) return SurfacePatch::disk(s.centroid, s.normal, s.diskRadius());
  return SurfacePatch::fromTriangles(std::get<std::vector<Triangle>>(s.shape));
}

namespace {

double surfaceSpacing(const CellGrid& grid) { return grid.minSpacing() / (grid.degree() + 1); }

// Shared walk over surface quadrature points: per-cell dense scalar mass
// blocks (optional) and/or the weighted load vector.
void accumulateSurface(const CellGrid& grid, const SurfacePatch& region, const FieldFn* field,
                       double scale, std::map<int, Eigen::MatrixXd>* cellMass,
                       Eigen::VectorXd* vector) {
  const auto points = region.quadrature(surfaceSpacing(grid));
  TensorBasis basis(grid.degree());
  const int nb = basis.numModes();

  Eigen::VectorXd N;
  size_t hits = 0;
  for (const SurfacePoint& q : points) {
    std::array<int, 3> cell;
    Vec3 xi;
    if (!grid.locate(q.x, cell, xi)) continue;
    hits++;
    const int ac = grid.activeIndex(cell[0], cell[1], cell[2]);
    basis.evalValues(xi, N);

    if (cellMass) {
      auto [it, inserted] = cellMass->try_emplace(ac, Eigen::MatrixXd::Zero(nb, nb));
      it->second.noalias() += (scale * q.weight) * (N * N.transpose());
    }
    if (vector && field) {
      const Vec3 g = (*field)(q.x);
      const int* dofs = grid.cellScalarDofs(ac);
      for (int i = 0; i < nb; ++i) {
        const double c = scale * q.weight * N[i];
        for (int a = 0; a < 3; ++a) (*vector)[3 * dofs[i] + a] += c * g[a];
      }
    }
  }
  if (hits == 0)
    throw std::runtime_error("surface region lies outside every active cell");
}

void emitMassTriplets(const CellGrid& grid, const std::map<int, Eigen::MatrixXd>& cellMass,
                      std::vector<Eigen::Triplet<double>>& lower) {
  const int nb = grid.modesPerCell();
  for (const auto& [ac, M] : cellMass) {
    const int* dofs = grid.cellScalarDofs(ac);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) {
        if (M(i, j) == 0.0) continue;
        for (int a = 0; a < 3; ++a) {
          const int gi = 3 * dofs[i] + a, gj = 3 * dofs[j] + a;
          if (gi >= gj) lower.emplace_back(gi, gj, M(i, j));
        }
      }
  }
}

}  // namespace

void penalty_dirichlet(const CellGrid& grid, const SurfacePatch& region, const FieldFn& prescribed,
                       double beta, std::vector<Eigen::Triplet<double>>& matrixLower,
                       Eigen::VectorXd& vector) {
  if (vector.size() != grid.numDofs()) vector.setZero(grid.numDofs());
  std::map<int, Eigen::MatrixXd> cellMass;
  accumulateSurface(grid, region, &prescribed, beta, &cellMass, &vector);
  emitMassTriplets(grid, cellMass, matrixLower);
}

void penalty_load(const CellGrid& grid, const SurfacePatch& region, const FieldFn& prescribed,
                  double beta, Eigen::VectorXd& vector) {
  if (vector.size() != grid.numDofs()) vector.setZero(grid.numDofs());
  accumulateSurface(grid, region, &prescribed, beta, nullptr, &vector);
}

Eigen::VectorXd neumann_load(const CellGrid& grid, const SurfacePatch& patch,
                             const FieldFn& traction) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(grid.numDofs());
  accumulateSurface(grid, patch, &traction, 1.0, nullptr, &f);
  return f;
}

}  // namespace framecell::fcm
