#include "framecell/fcm/field.hpp"

#include <stdexcept>

namespace framecell::fcm {

ElasticField::ElasticField(const CellGrid& grid, const Material& material,
                           Eigen::VectorXd coefficients)
    : grid_(grid), material_(material), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.numDofs())
    throw std::invalid_argument("ElasticField: coefficient size mismatch");
}

double von_mises(const Mat3& s) {
  const Mat3 dev = s - Mat3::Identity() * (s.trace() / 3.0);
  return std::sqrt(1.5 * dev.squaredNorm());
}

ElasticField::Sample ElasticField::evaluate(const Vec3& x) const {
  std::array<int, 3> cell;
  Vec3 xi;
  if (!grid_.locate(x, cell, xi))
    throw std::runtime_error("ElasticField::evaluate: point outside the active grid");

  TensorBasis basis(grid_.degree());
  Eigen::VectorXd N;
  Eigen::Matrix<double, Eigen::Dynamic, 3> dN;
  basis.eval(xi, N, dN);

  const Vec3 scale = 2.0 / grid_.spacing().array();
  const int nb = basis.numModes();
  const int* dofs = grid_.cellScalarDofs(grid_.activeIndex(cell[0], cell[1], cell[2]));

  Sample out;
  out.u.setZero();
  Mat3 gradU = Mat3::Zero();  // gradU(a, d) = du_a / dx_d
  for (int i = 0; i < nb; ++i)
    for (int a = 0; a < 3; ++a) {
      const double c = coeffs_[3 * dofs[i] + a];
      out.u[a] += c * N[i];
      for (int d = 0; d < 3; ++d) gradU(a, d) += c * dN(i, d) * scale[d];
    }

  out.strain = 0.5 * (gradU + gradU.transpose());
  const double lambda = material_.lambda(), mu = material_.mu();
  out.stress = lambda * out.strain.trace() * Mat3::Identity() + 2.0 * mu * out.strain;
  out.vonMises = von_mises(out.stress);
  return out;
}

}  // namespace framecell::fcm
