#pragma once

#include "framecell/fcm/grid.hpp"
#include "framecell/material.hpp"

namespace framecell::fcm {

/// Discrete elastic solution: coefficient vector plus evaluators for
/// displacement, strain, stress and von Mises stress. Holds references;
/// the grid must outlive the field.
class ElasticField {
 public:
  ElasticField(const CellGrid& grid, const Material& material, Eigen::VectorXd coefficients);

  struct Sample {
    Vec3 u;
    Mat3 strain;
    Mat3 stress;
    double vonMises;
  };

  /// Throws when x lies outside every active cell.
  Sample evaluate(const Vec3& x) const;

  Vec3 displacement(const Vec3& x) const { return evaluate(x).u; }

  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  const CellGrid& grid() const { return grid_; }
  const Material& material() const { return material_; }

 private:
  const CellGrid& grid_;
  Material material_;
  Eigen::VectorXd coeffs_;
};

double von_mises(const Mat3& stress);

}  // namespace framecell::fcm
