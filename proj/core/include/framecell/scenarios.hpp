#pragma once

#include "framecell/twoscale.hpp"

namespace framecell::scenarios {

/// Built-in verification case: a straight cantilever along +x of three
/// segments (solid circular, hollow circular, solid circular) with a tip
/// lateral force and bending moment. The middle segment is condensed from
/// a resolved 3D model; the reference models it with beam elements.
struct CantileverConfig {
  // Segment lengths are configurable. The defaults make the cantilever
  // slender (span/diameter ~ 67): rigid-plane-section coupling at the B/C
  // disks suppresses Poisson contraction there, a physical end effect of
  // roughly one diameter of extra stiffness per interface, and slenderness
  // is what makes it negligible against the beam reference.
  double lenAB = 1800.0;  // mm, solid segment at the support
  double lenBC = 400.0;   // mm, hollow segment, condensed in the two-scale run
  double lenCD = 1800.0;  // mm, solid segment at the tip
  double rSolid = 30.0;
  double rIn = 20.0;
  double rOut = 30.0;
  Material material{2.0e5, 0.3};
  double tipForceY = 1.0;      // N
  double tipMomentZ = 100.0;   // N*mm
  double elementLength = 100.0;

  bool refined = false;
  std::array<int, 3> deskResolution{20, 8, 8};
  int deskOctreeDepth = 3;
  std::array<int, 3> refinedResolution{32, 12, 12};
  int refinedOctreeDepth = 4;

  std::array<int, 3> resolution() const { return refined ? refinedResolution : deskResolution; }
  int octreeDepth() const { return refined ? refinedOctreeDepth : deskOctreeDepth; }
};

/// The hollow middle segment as a condensation spec with its two end-disk
/// interfaces.
SubstructureSpec cantilever_segment_spec(const CantileverConfig& cfg);

/// All-beam reference model, 100 mm elements throughout.
FrameModel cantilever_reference(const CantileverConfig& cfg);

/// Two-scale model: beams outside B-C, a superelement spec across B-C.
TwoScaleJob cantilever_job(const CantileverConfig& cfg);

struct CantileverResult {
  GlobalSolution reference;
  GlobalSolution twoScale;
  CondensedStiffness condensed;
  std::vector<PointError> errors;  // at the beam nodes shared by both models
  double maxError = 0.0;
};

CantileverResult run_cantilever(const CantileverConfig& cfg, int threads = 1);

/// Synthetic 5-interface structural node: a central sphere with five
/// cylindrical arms (+-x, +-y, +z). The thin variant hollows the sphere,
/// making the node more compliant. Stands in for unpublished real node
/// geometries in end-to-end tests.
struct StarNodeConfig {
  double sphereRadius = 40.0;
  double shellInnerRadius = 32.0;  // thin variant only
  double armRadius = 12.0;
  double armLength = 60.0;  // interface distance from the center
  bool thinShell = false;
  Material material{2.0e5, 0.3};
  std::array<int, 3> resolution{12, 12, 12};
  int p = 2;
  int octreeDepth = 2;
};

SubstructureSpec star_node_spec(const StarNodeConfig& cfg);

/// Small frame around the star node: four horizontal beams to fixed
/// supports and a loaded vertical column on the +z interface.
TwoScaleJob star_frame_job(const StarNodeConfig& cfg, const Vec3& topForce = Vec3(200, 0, -15000));

}  // namespace framecell::scenarios
