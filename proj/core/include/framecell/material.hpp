#pragma once

#include <stdexcept>

namespace framecell {

/// Isotropic linear-elastic material. E in MPa, nu dimensionless.
struct Material {
  double E = 2.0e5;
  double nu = 0.3;

  Material() = default;
  Material(double youngs, double poisson) : E(youngs), nu(poisson) {
    if (!(E > 0.0)) throw std::invalid_argument("Material: E must be positive");
    if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("Material: nu must be in (-1, 0.5)");
  }

  double G() const { return E / (2.0 * (1.0 + nu)); }

  // Lame parameters for the 3D isotropic stiffness tensor.
  double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double mu() const { return G(); }
};

}  // namespace framecell
