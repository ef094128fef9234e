#pragma once

#include <memory>
#include <optional>

#include "framecell/fcm/boundary.hpp"
#include "framecell/fcm/solver.hpp"
#include "framecell/geometry.hpp"

namespace framecell {

struct FcmParams {
  std::array<int, 3> resolution{10, 10, 10};
  int p = 3;
  int octreeDepth = 4;
  double beta = 1e14;
  double margin = 0.0;
};

/// Everything needed to reduce one 3D node model to a superelement:
/// geometry, the ordered beam-to-node interfaces and the FCM parameters.
/// Boundary DOF i belongs to interface i / 6; within an interface the
/// order is (ux, uy, uz, rx, ry, rz) in global axes.
struct SubstructureSpec {
  Domain domain;
  std::vector<InterfaceSection> interfaces;
  FcmParams fcm;

  int numBoundaryDofs() const { return 6 * int(interfaces.size()); }
};

/// Plane-section rigid motion prescribed by boundary DOF `dofIndex` on its
/// own interface; all other interfaces receive the zero field. Rotational
/// DOFs are linearized unit rotations u = e_a x (x - c) about the
/// interface centroid.
std::vector<fcm::FieldFn> unit_deformation_bc(const SubstructureSpec& spec, int dofIndex);

/// Plane-section motion for a full 6-vector (u, theta) of one interface.
fcm::FieldFn plane_section_field(const InterfaceSection& s, const Vec6& data);

struct ChangeOfBasis {
  Eigen::MatrixXd N;                  // n x k, column i = unit-deformation case i
  std::vector<double> traceError;     // per column, relative trace deviation
};

struct CondensedStiffness {
  Eigen::MatrixXd K;          // k x k, symmetric
  int interfaces = 0;         // DOF order: interfaces in spec order, 6 DOFs each
  uint64_t provenance = 0;    // content hash of the producing spec
  double rawAsymmetry = 0.0;  // relative asymmetry before symmetrization

  int k() const { return int(K.rows()); }
};

/// Intermediates of a condensation run, reusable for the global-to-local
/// stress analysis and inspectable in tests.
struct CondensationWorkspace {
  std::shared_ptr<fcm::CellGrid> grid;
  fcm::SparseSym stiffness;                    // unconstrained K, lower stored
  fcm::SparseSym penalty;                      // union of all interface penalties
  std::shared_ptr<fcm::Factorization> fact;    // of K + penalty
  ChangeOfBasis basis;
};

/// Builds the grid, assembles K once, assembles the penalty block for the
/// union of all interfaces once, factorizes once and solves the k
/// unit-deformation cases.
CondensationWorkspace compute_change_of_basis(const SubstructureSpec& spec, int threads = 1);

/// K_k = N^T K N, symmetrized.
CondensedStiffness condense(const fcm::SparseSym& stiffness, const Eigen::MatrixXd& N);

/// The six linearized rigid motions of the interface set (translations and
/// rotations about the common centroid), as a 6n x 6 matrix of boundary-DOF
/// vectors. These span the exact nullspace of any valid superelement.
Eigen::MatrixXd rigid_interface_modes(const SubstructureSpec& spec);

/// Full pipeline. When `workspace` is non-null the intermediates are kept.
CondensedStiffness compute_condensed(const SubstructureSpec& spec, int threads = 1,
                                     CondensationWorkspace* workspace = nullptr);

struct ValidationReport {
  double symmetryError = 0.0;       // relative, after symmetrization of input
  Eigen::VectorXd eigenvalues;      // ascending
  int rigidBodyModes = 0;           // eigenvalues below 1e-6 * lambda_max
  bool negativeEigenvalue = false;  // below -1e-6 * lambda_max
  bool pass = false;

  std::string summary() const;
};

ValidationReport validate_condensed(const Eigen::MatrixXd& Kk);

/// Stable content hash of a spec (geometry described through its bounding
/// box and classification samples, interfaces and FCM parameters).
uint64_t spec_content_hash(const SubstructureSpec& spec);

}  // namespace framecell
