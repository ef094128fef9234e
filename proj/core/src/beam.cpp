#include "framecell/beam.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>

namespace framecell {

CrossSection section_circular(double r, double nu) {
  if (!(r > 0.0)) throw std::invalid_argument("section_circular: radius must be positive");
  const double pi = std::numbers::pi;
  CrossSection s;
  s.A = pi * r * r;
  s.Iy = s.Iz = pi * std::pow(r, 4) / 4.0;
  s.J = pi * std::pow(r, 4) / 2.0;
  s.kappa = 6.0 * (1.0 + nu) / (7.0 + 6.0 * nu);
  return s;
}

CrossSection section_hollow_circular(double rIn, double rOut, double nu) {
  if (!(rIn > 0.0 && rIn < rOut))
    throw std::invalid_argument("section_hollow_circular: need 0 < rIn < rOut");
  const double pi = std::numbers::pi;
  CrossSection s;
  s.A = pi * (rOut * rOut - rIn * rIn);
  s.Iy = s.Iz = pi * (std::pow(rOut, 4) - std::pow(rIn, 4)) / 4.0;
  s.J = 2.0 * s.Iy;
  const double m = rIn / rOut;
  const double m2p1 = (1.0 + m * m) * (1.0 + m * m);
  s.kappa = 6.0 * (1.0 + nu) * m2p1 / ((7.0 + 6.0 * nu) * m2p1 + (20.0 + 12.0 * nu) * m * m);
  return s;
}

Mat12 local_stiffness_timoshenko(const Material& mat, const CrossSection& sec, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("local_stiffness_timoshenko: L must be positive");
  const double E = mat.E, G = mat.G();
  const double A = sec.A, Iy = sec.Iy, Iz = sec.Iz, J = sec.J, kappa = sec.kappa;

  const double phiZ = 12.0 * E * Iz / (kappa * G * A * L * L);
  const double phiY = 12.0 * E * Iy / (kappa * G * A * L * L);
  const double hz = 1.0 + phiZ;
  const double hy = 1.0 + phiY;

  Mat12 K = Mat12::Zero();
  const double ax = E * A / L;
  const double tz = G * J / L;
  const double bz3 = 12.0 * E * Iz / (hz * L * L * L);
  const double by3 = 12.0 * E * Iy / (hy * L * L * L);
  const double bz2 = 6.0 * E * Iz / (hz * L * L);
  const double by2 = 6.0 * E * Iy / (hy * L * L);

  K(0, 0) = ax;
  K(1, 1) = bz3;
  K(2, 2) = by3;
  K(3, 3) = tz;
  K(4, 2) = -by2;
  K(4, 4) = (4.0 + phiY) * E * Iy / (hy * L);
  K(5, 1) = bz2;
  K(5, 5) = (4.0 + phiZ) * E * Iz / (hz * L);
  K(6, 0) = -ax;
  K(6, 6) = ax;
  K(7, 1) = -bz3;
  K(7, 5) = -bz2;
  K(7, 7) = bz3;
  K(8, 2) = -by3;
  K(8, 4) = by2;
  K(8, 8) = by3;
  K(9, 3) = -tz;
  K(9, 9) = tz;
  K(10, 2) = -by2;
  K(10, 4) = (2.0 - phiY) * E * Iy / (hy * L);
  K(10, 8) = by2;
  K(10, 10) = (4.0 + phiY) * E * Iy / (hy * L);
  K(11, 1) = bz2;
  K(11, 5) = (2.0 - phiZ) * E * Iz / (hz * L);
  K(11, 7) = -bz2;
  K(11, 11) = (4.0 + phiZ) * E * Iz / (hz * L);

  // Mirror the lower triangle.
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) K(i, j) = K(j, i);
  return K;
}

Mat12 element_rotation(const Vec3& a, const Vec3& b, const Vec3& refVec, bool* usedFallback) {
  if ((b - a).squaredNorm() <= 0.0) throw std::invalid_argument("element_rotation: a == b");
  const Vec3 x = (b - a).normalized();

  // The reference vector indicates the local z direction; its component
  // orthogonal to the axis is used. Vertical members fall back to global z,
  // then global x.
  bool fallback = false;
  Vec3 ref = refVec;
  auto orthogonalPart = [&x](const Vec3& v) { return Vec3(v - x * x.dot(v)); };
  if (orthogonalPart(ref).norm() < 1e-8 * ref.norm() || ref.norm() == 0.0) {
    fallback = true;
    ref = Vec3::UnitZ();
    if (orthogonalPart(ref).norm() < 1e-8) ref = Vec3::UnitX();
  }
  if (usedFallback) *usedFallback = fallback;

  const Vec3 z = orthogonalPart(ref).normalized();
  const Vec3 y = z.cross(x);

  Mat3 R;
  R.row(0) = x;
  R.row(1) = y;
  R.row(2) = z;

  Mat12 T = Mat12::Zero();
  for (int blk = 0; blk < 4; ++blk) T.block<3, 3>(3 * blk, 3 * blk) = R;
  return T;
}

namespace {

struct DofMap {
  std::map<int, int> nodeIndex;
  int numNodes = 0;

  explicit DofMap(const FrameModel& m) {
    for (const auto& [id, pos] : m.nodes) nodeIndex[id] = numNodes++;
  }

  int dof(int nodeId, int local) const { return 6 * nodeIndex.at(nodeId) + local; }
};

double elementLength(const FrameModel& m, const BeamElement& e) {
  return (m.nodes.at(e.nodeB) - m.nodes.at(e.nodeA)).norm();
}

Eigen::SparseMatrix<double> assembleGlobal(const FrameModel& model, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trips;
  for (const BeamElement& e : model.elements) {
    const double L = elementLength(model, e);
    if (!(L > 0.0)) throw std::invalid_argument("FrameModel: element with zero length");
    const Mat12 T = element_rotation(model.nodes.at(e.nodeA), model.nodes.at(e.nodeB), e.refVec);
    const Mat12 Kl = local_stiffness_timoshenko(e.material, e.section, L);
    const Mat12 Kg = T.transpose() * Kl * T;
    int g[12];
    for (int i = 0; i < 6; ++i) {
      g[i] = dofs.dof(e.nodeA, i);
      g[6 + i] = dofs.dof(e.nodeB, i);
    }
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) trips.emplace_back(g[i], g[j], Kg(i, j));
  }

  for (const SuperelementAttachment& se : model.superelements) {
    const int k = int(6 * se.nodes.size());
    if (se.K.rows() != k || se.K.cols() != k)
      throw std::invalid_argument("superelement: matrix size inconsistent with attached nodes");
    std::vector<int> g(k);
    for (size_t n = 0; n < se.nodes.size(); ++n) {
      if (!model.nodes.count(se.nodes[n]))
        throw std::invalid_argument("superelement attached to missing node " +
                                    std::to_string(se.nodes[n]));
      for (int i = 0; i < 6; ++i) g[6 * n + i] = dofs.dof(se.nodes[n], i);
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) trips.emplace_back(g[i], g[j], se.K(i, j));
  }

  Eigen::SparseMatrix<double> K(6 * dofs.numNodes, 6 * dofs.numNodes);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

}  // namespace

GlobalSolution assemble_and_solve(const FrameModel& model) {
  if (model.nodes.empty()) throw std::invalid_argument("FrameModel: no nodes");
  DofMap dofs(model);
  const int n = 6 * dofs.numNodes;

  Eigen::SparseMatrix<double> K = assembleGlobal(model, dofs);

  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (const auto& [id, load] : model.loads) {
    if (!model.nodes.count(id))
      throw std::invalid_argument("load references missing node " + std::to_string(id));
    for (int i = 0; i < 6; ++i) f[dofs.dof(id, i)] += load[i];
  }

  std::vector<bool> fixed(n, false);
  for (const auto& [id, flags] : model.supports) {
    if (!model.nodes.count(id))
      throw std::invalid_argument("support references missing node " + std::to_string(id));
    for (int i = 0; i < 6; ++i)
      if (flags[i]) fixed[dofs.dof(id, i)] = true;
  }

  std::vector<int> freeIdx;
  freeIdx.reserve(n);
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) freeIdx.push_back(i);
  std::vector<int> toFree(n, -1);
  for (size_t i = 0; i < freeIdx.size(); ++i) toFree[freeIdx[i]] = int(i);

  // Row/column elimination of supported DOFs.
  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < K.outerSize(); ++col) {
    if (toFree[col] < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      if (toFree[it.row()] < 0) continue;
      trips.emplace_back(toFree[it.row()], toFree[col], it.value());
    }
  }
  Eigen::SparseMatrix<double> Kff(freeIdx.size(), freeIdx.size());
  Kff.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd ff(freeIdx.size());
  for (size_t i = 0; i < freeIdx.size(); ++i) ff[i] = f[freeIdx[i]];

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Kff);
  auto countZeroModes = [&ldlt]() {
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    int zero = 0;
    for (int i = 0; i < d.size(); ++i)
      if (std::abs(d[i]) <= 1e-12 * dmax) zero++;
    return zero;
  };
  if (ldlt.info() != Eigen::Success) throw SingularSystemError(countZeroModes());

  Eigen::VectorXd uf = ldlt.solve(ff);
  const double fnorm = ff.norm();
  double residual = fnorm > 0.0 ? (Kff * uf - ff).norm() / fnorm : 0.0;
  if (!uf.allFinite() || residual > 1e-8) throw SingularSystemError(countZeroModes());

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (size_t i = 0; i < freeIdx.size(); ++i) u[freeIdx[i]] = uf[i];

  GlobalSolution sol;
  sol.residual = residual;
  for (const auto& [id, pos] : model.nodes) {
    Vec6 d;
    for (int i = 0; i < 6; ++i) d[i] = u[dofs.dof(id, i)];
    sol.displacements[id] = d;
  }
  const Eigen::VectorXd r = K * u - f;
  for (const auto& [id, flags] : model.supports) {
    Vec6 reac = Vec6::Zero();
    for (int i = 0; i < 6; ++i)
      if (flags[i]) reac[i] = r[dofs.dof(id, i)];
    sol.reactions[id] = reac;
  }
  return sol;
}

Vec12 internal_actions(const FrameModel& model, size_t elementIndex, const GlobalSolution& sol) {
  const BeamElement& e = model.elements.at(elementIndex);
  const Mat12 T = element_rotation(model.nodes.at(e.nodeA), model.nodes.at(e.nodeB), e.refVec);
  const Mat12 Kl = local_stiffness_timoshenko(e.material, e.section, elementLength(model, e));

  Vec12 ug;
  ug.segment<6>(0) = sol.displacements.at(e.nodeA);
  ug.segment<6>(6) = sol.displacements.at(e.nodeB);
  return Kl * (T * ug);
}

BucklingCheck euler_buckling_check(const FrameModel& model, size_t elementIndex,
                                   double axialCompression, double effectiveLengthFactor) {
  const BeamElement& e = model.elements.at(elementIndex);
  const double L = elementLength(model, e);
  const double Imin = std::min(e.section.Iy, e.section.Iz);
  const double pi = std::numbers::pi;

  BucklingCheck c;
  c.criticalLoad = pi * pi * e.material.E * Imin / std::pow(effectiveLengthFactor * L, 2);
  c.ratio = axialCompression / c.criticalLoad;
  c.pass = axialCompression < c.criticalLoad;
  return c;
}

}  // namespace framecell
