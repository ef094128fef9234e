#include "framecell/condense.hpp"

#include <Eigen/Eigenvalues>
#include <iostream>
#include <sstream>

namespace framecell {

std::vector<fcm::FieldFn> unit_deformation_bc(const SubstructureSpec& spec, int dofIndex) {
  const int k = spec.numBoundaryDofs();
  if (dofIndex < 0 || dofIndex >= k)
    throw std::invalid_argument("unit_deformation_bc: dof index out of range");
  const int owner = dofIndex / 6;
  const int local = dofIndex % 6;

  std::vector<fcm::FieldFn> fields;
  fields.reserve(spec.interfaces.size());
  for (size_t s = 0; s < spec.interfaces.size(); ++s) {
    if (int(s) != owner) {
      fields.emplace_back([](const Vec3&) { return Vec3::Zero().eval(); });
      continue;
    }
    Vec6 data = Vec6::Zero();
    data[local] = 1.0;
    fields.push_back(plane_section_field(spec.interfaces[s], data));
  }
  return fields;
}

fcm::FieldFn plane_section_field(const InterfaceSection& s, const Vec6& data) {
  const Vec3 u = data.head<3>();
  const Vec3 theta = data.tail<3>();
  const Vec3 c = s.centroid;
  return [u, theta, c](const Vec3& x) { return Vec3(u + theta.cross(x - c)); };
}

namespace {

fcm::GridParams gridParams(const SubstructureSpec& spec) {
  fcm::GridParams gp;
  gp.resolution = spec.fcm.resolution;
  gp.p = spec.fcm.p;
  gp.margin = spec.fcm.margin;
  return gp;
}

// Relative deviation of the solved trace from the prescribed field,
// sampled on the interface quadrature points.
double traceDeviation(const fcm::CellGrid& grid, const Eigen::VectorXd& coeffs,
                      const std::vector<fcm::SurfacePatch>& patches,
                      const std::vector<fcm::FieldFn>& prescribed) {
  fcm::TensorBasis basis(grid.degree());
  Eigen::VectorXd N;
  double err2 = 0.0, ref2 = 0.0;
  for (size_t s = 0; s < patches.size(); ++s) {
    for (const fcm::SurfacePoint& q : patches[s].quadrature(grid.minSpacing())) {
      std::array<int, 3> cell;
      Vec3 xi;
      if (!grid.locate(q.x, cell, xi)) continue;
      basis.evalValues(xi, N);
      const int* dofs = grid.cellScalarDofs(grid.activeIndex(cell[0], cell[1], cell[2]));
      Vec3 u = Vec3::Zero();
      for (int i = 0; i < basis.numModes(); ++i)
        for (int a = 0; a < 3; ++a) u[a] += coeffs[3 * dofs[i] + a] * N[i];
      const Vec3 g = prescribed[s](q.x);
      err2 += q.weight * (u - g).squaredNorm();
      ref2 += q.weight * g.squaredNorm();
    }
  }
  // Unit cases always have a nonzero prescribed part on the owning interface.
  return ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
}

}  // namespace

CondensationWorkspace compute_change_of_basis(const SubstructureSpec& spec, int threads) {
  if (spec.interfaces.empty())
    throw std::invalid_argument("compute_change_of_basis: spec has no interfaces");
  const int k = spec.numBoundaryDofs();

  CondensationWorkspace ws;
  ws.grid = std::make_shared<fcm::CellGrid>(spec.domain, gridParams(spec));
  fcm::QuadratureScheme quad{spec.fcm.octreeDepth, 0};
  ws.stiffness =
      fcm::assemble_unconstrained(*ws.grid, spec.domain, spec.domain.material(), quad, threads);

  // Every unit-deformation case constrains every interface, so one penalty
  // block over the union of all interface surfaces serves all k cases and
  // the factorization is reused exactly.
  std::vector<fcm::SurfacePatch> patches;
  patches.reserve(spec.interfaces.size());
  for (const InterfaceSection& s : spec.interfaces) patches.push_back(fcm::patch_from_section(s));

  std::vector<Eigen::Triplet<double>> penaltyTrips;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(ws.grid->numDofs());
  auto zeroField = [](const Vec3&) { return Vec3::Zero().eval(); };
  for (const fcm::SurfacePatch& patch : patches)
    fcm::penalty_dirichlet(*ws.grid, patch, zeroField, spec.fcm.beta, penaltyTrips, zero);
  ws.penalty.resize(ws.grid->numDofs(), ws.grid->numDofs());
  ws.penalty.setFromTriplets(penaltyTrips.begin(), penaltyTrips.end());

  {
    fcm::SparseSym A = ws.stiffness + ws.penalty;
    ws.fact = std::make_shared<fcm::Factorization>(std::move(A));
  }

  ws.basis.N.resize(ws.grid->numDofs(), k);
  ws.basis.traceError.resize(k);
  for (int i = 0; i < k; ++i) {
    const auto fields = unit_deformation_bc(spec, i);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ws.grid->numDofs());
    // Only the owning interface contributes; the others prescribe zero.
    fcm::penalty_load(*ws.grid, patches[i / 6], fields[i / 6], spec.fcm.beta, rhs);
    ws.basis.N.col(i) = ws.fact->solve(rhs);

    ws.basis.traceError[i] = traceDeviation(*ws.grid, ws.basis.N.col(i), patches, fields);
    if (ws.basis.traceError[i] > 1e-3)
      std::cerr << "warning: unit-deformation case " << i << " trace deviation "
                << ws.basis.traceError[i] << " exceeds 1e-3\n";
  }
  return ws;
}

CondensedStiffness condense(const fcm::SparseSym& stiffness, const Eigen::MatrixXd& N) {
  if (stiffness.rows() != N.rows())
    throw std::invalid_argument("condense: dimension mismatch between K and N");

  const Eigen::MatrixXd KN = stiffness.selfadjointView<Eigen::Lower>() * N;
  const Eigen::MatrixXd raw = N.transpose() * KN;

  CondensedStiffness out;
  const double scale = raw.cwiseAbs().maxCoeff();
  out.rawAsymmetry = scale > 0.0 ? (raw - raw.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
  out.K = 0.5 * (raw + raw.transpose());
  out.interfaces = int(N.cols()) / 6;
  return out;
}

Eigen::MatrixXd rigid_interface_modes(const SubstructureSpec& spec) {
  const int n = int(spec.interfaces.size());
  Vec3 c0 = Vec3::Zero();
  for (const InterfaceSection& s : spec.interfaces) c0 += s.centroid;
  if (n > 0) c0 /= double(n);

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(6 * n, 6);
  for (int i = 0; i < n; ++i) {
    const Vec3 r = spec.interfaces[size_t(i)].centroid - c0;
    for (int a = 0; a < 3; ++a) {
      R(6 * i + a, a) = 1.0;  // rigid translation e_a
      // linearized rigid rotation e_a about c0: u = e_a x r, theta = e_a
      const Vec3 u = Vec3::Unit(a).cross(r);
      R.block<3, 1>(6 * i, 3 + a) = u;
      R(6 * i + 3 + a, 3 + a) = 1.0;
    }
  }
  return R;
}

CondensedStiffness compute_condensed(const SubstructureSpec& spec, int threads,
                                     CondensationWorkspace* workspace) {
  CondensationWorkspace ws = compute_change_of_basis(spec, threads);
  CondensedStiffness Kk = condense(ws.stiffness, ws.basis.N);
  Kk.interfaces = int(spec.interfaces.size());
  Kk.provenance = spec_content_hash(spec);

  // Rigid-body filtering. The continuous substructure has exactly six zero-
  // energy modes, and all six are representable exactly in the plane-section
  // basis, so any energy K_k leaves on them is numerical noise from the
  // penalized solves. Projecting onto the complement of the geometric rigid
  // space restores K_k R = 0 while perturbing the flexible block only at
  // noise level.
  const Eigen::MatrixXd R = rigid_interface_modes(spec);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R)
                                .householderQ() *
                            Eigen::MatrixXd::Identity(R.rows(), R.cols());
  const Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(R.rows(), R.rows()) - Q * Q.transpose();
  Kk.K = (P * Kk.K * P).eval();
  Kk.K = 0.5 * (Kk.K + Kk.K.transpose()).eval();

  if (workspace) *workspace = std::move(ws);
  return Kk;
}

ValidationReport validate_condensed(const Eigen::MatrixXd& Kk) {
  ValidationReport r;
  const double scale = Kk.cwiseAbs().maxCoeff();
  r.symmetryError = scale > 0.0 ? (Kk - Kk.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (Kk + Kk.transpose()));
  r.eigenvalues = eig.eigenvalues();
  const double lmax = r.eigenvalues.cwiseAbs().maxCoeff();
  for (int i = 0; i < r.eigenvalues.size(); ++i) {
    if (r.eigenvalues[i] < -1e-6 * lmax) r.negativeEigenvalue = true;
    if (std::abs(r.eigenvalues[i]) < 1e-6 * lmax) r.rigidBodyModes++;
  }
  r.pass = r.symmetryError <= 1e-8 && r.rigidBodyModes == 6 && !r.negativeEigenvalue;
  return r;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "symmetry error: " << symmetryError << "\n";
  os << "rigid-body modes (|lambda| < 1e-6 lambda_max): " << rigidBodyModes << "\n";
  os << "negative eigenvalue: " << (negativeEigenvalue ? "yes" : "no") << "\n";
  os << "eigenvalues:";
  for (int i = 0; i < eigenvalues.size(); ++i) os << " " << eigenvalues[i];
  os << "\nresult: " << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

uint64_t spec_content_hash(const SubstructureSpec& spec) {
  // Bump when the condensation output changes for identical specs, so that
  // persistent caches from older builds are never served.
  constexpr uint64_t kFormatVersion = 2;
  uint64_t h = 1469598103934665603ull ^ (kFormatVersion * 0x9e3779b97f4a7c15ull);  // FNV-1a
  auto mix = [&h](const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  auto mixDouble = [&mix](double v) { mix(&v, sizeof(v)); };
  auto mixInt = [&mix](int64_t v) { mix(&v, sizeof(v)); };

  // Geometry signature: bounding box plus membership of a fixed lattice.
  const Box bb = spec.domain.boundingBox();
  for (int d = 0; d < 3; ++d) {
    mixDouble(bb.lo[d]);
    mixDouble(bb.hi[d]);
  }
  constexpr int kLattice = 17;
  for (int i = 0; i < kLattice; ++i)
    for (int j = 0; j < kLattice; ++j)
      for (int k = 0; k < kLattice; ++k) {
        Vec3 t(i / double(kLattice - 1), j / double(kLattice - 1), k / double(kLattice - 1));
        Vec3 x = bb.lo + bb.extent().cwiseProduct(t);
        mixInt(spec.domain.inside(x) ? 1 : 0);
      }

  mixInt(spec.domain.alphaExponent());
  mixDouble(spec.domain.material().E);
  mixDouble(spec.domain.material().nu);

  for (const InterfaceSection& s : spec.interfaces) {
    for (int d = 0; d < 3; ++d) mixDouble(s.centroid[d]);
    for (int d = 0; d < 3; ++d) mixDouble(s.normal[d]);
    if (s.isDisk()) {
      mixDouble(s.diskRadius());
    } else {
      for (const Triangle& t : std::get<std::vector<Triangle>>(s.shape))
        for (const Vec3* v : {&t.v0, &t.v1, &t.v2})
          for (int d = 0; d < 3; ++d) mixDouble((*v)[d]);
    }
    mixInt(s.globalNodeId);
  }

  for (int d = 0; d < 3; ++d) mixInt(spec.fcm.resolution[d]);
  mixInt(spec.fcm.p);
  mixInt(spec.fcm.octreeDepth);
  mixDouble(spec.fcm.beta);
  mixDouble(spec.fcm.margin);
  return h;
}

}  // namespace framecell
