#pragma once

#include <Eigen/Dense>

#include "framecell/types.hpp"

namespace framecell::fcm {

/// 1D integrated Legendre basis of degree p on [-1, 1]: two nodal modes
/// (1 -/+ xi)/2 followed by the p-1 internal modes
/// phi_j = (L_j - L_{j-2}) / sqrt(4j - 2), j = 2..p, which vanish at +-1.
/// vals/derivs must hold p+1 entries.
void shape_1d(int p, double xi, double* vals, double* derivs);

/// Tensor-product basis on the reference cell [-1, 1]^3. Scalar mode
/// (a, b, c) has flat index (a*(p+1) + b)*(p+1) + c.
class TensorBasis {
 public:
  explicit TensorBasis(int p);

  int degree() const { return p_; }
  int numModes() const { return n_; }

  /// Values and reference-coordinate gradients of all modes at xi.
  void eval(const Vec3& xi, Eigen::VectorXd& values,
            Eigen::Matrix<double, Eigen::Dynamic, 3>& gradients) const;

  void evalValues(const Vec3& xi, Eigen::VectorXd& values) const;

 private:
  int p_;
  int n_;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};

const GaussRule& gauss_rule(int numPoints);

}  // namespace framecell::fcm
