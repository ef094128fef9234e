#pragma once

#include <Eigen/Sparse>
#include <map>
#include <optional>
#include <vector>

#include "framecell/material.hpp"
#include "framecell/types.hpp"

namespace framecell {

/// Beam cross-section properties. A in mm^2, I and J in mm^4.
struct CrossSection {
  double A = 0.0;
  double Iy = 0.0;
  double Iz = 0.0;
  double J = 0.0;
  double kappa = 1.0;  // shear correction factor, (0, 1]
};

/// Solid circular section with the Cowper shear correction factor.
CrossSection section_circular(double r, double nu);

/// Hollow circular section (annulus) with the Cowper shear correction factor.
CrossSection section_hollow_circular(double rIn, double rOut, double nu);

/// 12x12 Timoshenko element stiffness in local axes. DOF order per node:
/// (ux, uy, uz, rx, ry, rz); local x is the beam axis.
Mat12 local_stiffness_timoshenko(const Material& mat, const CrossSection& sec, double L);

/// Block-diagonal 12x12 transform T with local x along (b - a), local
/// z = normalize(x cross refVec), local y = z cross x. Rows of the 3x3
/// block are the local axes, so u_local = T u_global and
/// K_global = T^T K_local T. If refVec is (nearly) parallel to the axis a
/// fallback reference (global z, else global x) is used and reported.
Mat12 element_rotation(const Vec3& a, const Vec3& b, const Vec3& refVec,
                       bool* usedFallback = nullptr);

struct BeamElement {
  int nodeA = -1;
  int nodeB = -1;
  Material material;
  CrossSection section;
  Vec3 refVec{0.0, 0.0, 1.0};
};

/// Condensed stiffness block scattered into the 6 DOFs of each attached node.
struct SuperelementAttachment {
  Eigen::MatrixXd K;        // k x k, k = 6 * nodes.size()
  std::vector<int> nodes;   // attachment order fixes the DOF order
};

struct FrameModel {
  std::map<int, Vec3> nodes;                        // id -> position (mm)
  std::vector<BeamElement> elements;
  std::map<int, std::array<bool, 6>> supports;      // id -> fixed flags
  std::map<int, Vec6> loads;                        // id -> (F, M)
  std::vector<SuperelementAttachment> superelements;
};

struct GlobalSolution {
  std::map<int, Vec6> displacements;  // (u mm, theta rad)
  std::map<int, Vec6> reactions;      // at supported nodes only
  double residual = 0.0;              // ||Ku - f|| / ||f|| on free DOFs
};

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(int zeroEnergyModes)
      : std::runtime_error("singular global system: " + std::to_string(zeroEnergyModes) +
                           " zero-energy mode(s)"),
        modes(zeroEnergyModes) {}
  int modes;
};

/// Assembles beams and superelements, imposes supports by elimination and
/// solves the sparse symmetric system.
GlobalSolution assemble_and_solve(const FrameModel& model);

/// Element end forces f_e = K_e u_e in element-local axes. Sign convention:
/// entries 0..5 act on node A, 6..11 on node B; positive axial entry 6
/// means tension.
Vec12 internal_actions(const FrameModel& model, size_t elementIndex, const GlobalSolution& sol);

struct BucklingCheck {
  bool pass = true;
  double ratio = 0.0;          // compression / critical load
  double criticalLoad = 0.0;   // N
};

/// Euler screening for one element. Compression is positive; tension
/// members pass trivially. effectiveLengthFactor defaults to pinned-pinned.
BucklingCheck euler_buckling_check(const FrameModel& model, size_t elementIndex,
                                   double axialCompression, double effectiveLengthFactor = 1.0);

}  // namespace framecell
