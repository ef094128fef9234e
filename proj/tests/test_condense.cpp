#include <doctest.h>

#include <sstream>

#include "framecell/condense.hpp"
#include "framecell/matrix_io.hpp"

using namespace framecell;

namespace {

const Material kSteel(2.0e5, 0.3);

// short solid cylinder with two end interfaces, cheap enough for unit tests
SubstructureSpec smallSegment() {
  SubstructureSpec spec{
      Domain(ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(20, 0, 0), 6.0), kSteel), {}, {}};
  InterfaceSection a;
  a.centroid = Vec3(0, 0, 0);
  a.normal = Vec3(-1, 0, 0);
  a.shape = 6.0;
  a.globalNodeId = 1;
  InterfaceSection b = a;
  b.centroid = Vec3(20, 0, 0);
  b.normal = Vec3(1, 0, 0);
  b.globalNodeId = 2;
  spec.interfaces = {a, b};
  spec.fcm.resolution = {5, 3, 3};
  spec.fcm.p = 2;
  spec.fcm.octreeDepth = 2;
  return spec;
}

}  // namespace

TEST_CASE("unit deformation fields prescribe plane-section motion") {
  const SubstructureSpec spec = smallSegment();

  // translation dof of interface 0
  auto fields = unit_deformation_bc(spec, 1);
  CHECK(fields.size() == 2);
  CHECK(fields[0](Vec3(0, 3, 0)).isApprox(Vec3(0, 1, 0)));
  CHECK(fields[1](Vec3(20, 3, 0)).isApprox(Vec3(0, 0, 0)));

  // rotation about z of interface 1: u = e_z x (x - c)
  auto rot = unit_deformation_bc(spec, 6 + 5);
  CHECK(rot[0](Vec3(0, 1, 0)).isApprox(Vec3(0, 0, 0)));
  CHECK(rot[1](Vec3(20, 2, 0)).isApprox(Vec3(-2, 0, 0)));

  CHECK_THROWS(unit_deformation_bc(spec, 12));
  CHECK_THROWS(unit_deformation_bc(spec, -1));
}

TEST_CASE("condensed block is symmetric with exactly six rigid modes") {
  CondensationWorkspace ws;
  const CondensedStiffness Kk = compute_condensed(smallSegment(), 1, &ws);

  REQUIRE(Kk.k() == 12);
  CHECK(Kk.rawAsymmetry < 1e-8);
  for (double te : ws.basis.traceError) CHECK(te < 1e-3);

  const ValidationReport report = validate_condensed(Kk.K);
  CHECK(report.symmetryError < 1e-12);
  CHECK(report.rigidBodyModes == 6);
  CHECK_FALSE(report.negativeEigenvalue);
  CHECK(report.pass);
  CHECK(report.summary().find("PASS") != std::string::npos);

  // explicit rigid-body displacement of both interfaces produces no force
  Eigen::VectorXd b(12);
  const Vec3 t(0.3, -0.2, 0.7), w(0.01, 0.02, -0.015);
  b.segment<3>(0) = t + w.cross(Vec3(0, 0, 0));
  b.segment<3>(3) = w;
  b.segment<3>(6) = t + w.cross(Vec3(20, 0, 0));
  b.segment<3>(9) = w;
  const double lmax = report.eigenvalues.cwiseAbs().maxCoeff();
  CHECK((Kk.K * b).norm() < 1e-5 * lmax * b.norm());
}

TEST_CASE("change of basis reproduces its own boundary conditions") {
  const SubstructureSpec spec = smallSegment();
  CondensationWorkspace ws = compute_change_of_basis(spec);
  CHECK(ws.basis.N.cols() == 12);
  CHECK(ws.basis.N.rows() == ws.grid->numDofs());
  // axial unit translation of one end produces axial-dominated energy
  const Eigen::VectorXd col = ws.basis.N.col(0);
  const double energy = col.dot(ws.stiffness.selfadjointView<Eigen::Lower>() * col);
  CHECK(energy > 0.0);
}

TEST_CASE("spec content hash tracks every ingredient") {
  const SubstructureSpec base = smallSegment();
  const uint64_t h0 = spec_content_hash(base);
  CHECK(h0 == spec_content_hash(smallSegment()));  // deterministic

  SubstructureSpec r = smallSegment();
  r.fcm.resolution = {6, 3, 3};
  CHECK(spec_content_hash(r) != h0);

  SubstructureSpec p = smallSegment();
  p.fcm.p = 3;
  CHECK(spec_content_hash(p) != h0);

  SubstructureSpec geom = smallSegment();
  geom.domain = Domain(ImplicitShape::cylinder(Vec3(0, 0, 0), Vec3(20, 0, 0), 5.5), kSteel);
  CHECK(spec_content_hash(geom) != h0);

  SubstructureSpec iface = smallSegment();
  iface.interfaces[1].centroid = Vec3(19, 0, 0);
  CHECK(spec_content_hash(iface) != h0);
}

TEST_CASE("condensed matrix serialization round-trips byte-identically") {
  const CondensedStiffness Kk = compute_condensed(smallSegment());

  std::ostringstream first;
  write_condensed(first, Kk);

  std::istringstream in(first.str());
  const CondensedStiffness back = read_condensed(in);
  CHECK(back.k() == Kk.k());
  CHECK(back.interfaces == Kk.interfaces);
  CHECK(back.provenance == Kk.provenance);
  CHECK(back.K == Kk.K);  // bitwise

  std::ostringstream second;
  write_condensed(second, back);
  CHECK(first.str() == second.str());

  std::istringstream junk("not a matrix file");
  CHECK_THROWS(read_condensed(junk));
}
