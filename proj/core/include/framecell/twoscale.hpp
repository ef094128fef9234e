#pragma once

#include <functional>
#include <optional>

#include "framecell/beam.hpp"
#include "framecell/condense.hpp"
#include "framecell/fcm/field.hpp"

namespace framecell {

/// One 3D node in a two-scale job: either a spec to condense or a
/// precomputed matrix, plus the map interface index -> frame node id.
struct SubstructureInstance {
  std::string name;
  std::optional<SubstructureSpec> spec;
  std::optional<CondensedStiffness> precomputed;
  std::vector<int> attachNodes;
};

struct TwoScaleJob {
  FrameModel frame;
  std::vector<SubstructureInstance> substructures;
  bool wantLocalStress = true;
};

/// Boundary data of one substructure: per interface the (u, theta)
/// 6-vector taken from the global solution at the attached node.
using LocalBoundaryData = std::vector<Vec6>;

/// Scatters a condensed block into the frame. Validates that the
/// attachment names distinct existing nodes matching the block size.
void attach_superelement(FrameModel& frame, const CondensedStiffness& Kk,
                         const std::vector<int>& attachNodes);

LocalBoundaryData extract_boundary_data(const GlobalSolution& sol,
                                        const std::vector<int>& attachNodes);

struct LocalStressResult {
  std::shared_ptr<fcm::CellGrid> grid;
  Eigen::VectorXd coefficients;
  double maxVonMises = 0.0;  // MPa, over the boundary sample set
  Vec3 maxLocation{Vec3::Zero()};
  double strainEnergy = 0.0;  // N*mm, u^T K u / 2 on the unconstrained K

  fcm::ElasticField field(const Material& m) const {
    return fcm::ElasticField(*grid, m, coefficients);
  }
};

/// Global-to-local transition: imposes the plane-section fields from the
/// boundary data on the 3D model and recovers the resolved stress state.
/// When a workspace from the condensation is supplied its factorization
/// and change of basis are reused; the result is identical by linearity.
LocalStressResult local_stress_analysis(const SubstructureSpec& spec, const LocalBoundaryData& data,
                                        int threads = 1,
                                        const CondensationWorkspace* workspace = nullptr);

struct PointError {
  Vec3 x;
  double value = 0.0;
  bool defined = false;  // false where |u_ref| falls below the guard
};

/// Relative pointwise displacement error |u_ref - u_ts| / |u_ref| with an
/// undefined marker below `guard` instead of division.
std::vector<PointError> pointwise_error(const std::function<Vec3(const Vec3&)>& uRef,
                                        const std::function<Vec3(const Vec3&)>& uTs,
                                        const std::vector<Vec3>& samples, double guard = 1e-12);

/// Largest defined error, 0 when none is defined.
double max_defined_error(const std::vector<PointError>& errors);

struct SubstructureReport {
  std::string name;
  CondensedStiffness condensed;
  LocalBoundaryData boundary;
  std::optional<LocalStressResult> local;
};

struct JobReport {
  GlobalSolution global;
  std::vector<SubstructureReport> substructures;
  double maxDisplacement = 0.0;  // mm, over translational DOFs
};

/// Hook for content-addressed caching of condensation results. The default
/// computes in-process.
using CondenseFn =
    std::function<CondensedStiffness(const SubstructureSpec&, CondensationWorkspace*)>;

/// Full pipeline: condense -> assemble -> solve -> per node boundary data
/// and local stress.
JobReport run_job(const TwoScaleJob& job, int threads = 1, const CondenseFn& condenser = {});

}  // namespace framecell
