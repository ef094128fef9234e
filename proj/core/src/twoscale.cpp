#include "framecell/twoscale.hpp"

#include <set>
#include <stdexcept>

#include "framecell/fcm/assembly.hpp"
#include "framecell/fcm/quadrature.hpp"

namespace framecell {

void attach_superelement(FrameModel& frame, const CondensedStiffness& Kk,
                         const std::vector<int>& attachNodes) {
  if (int(attachNodes.size()) * 6 != Kk.k())
    throw std::invalid_argument("attach_superelement: attachment count does not match matrix size");
  std::set<int> distinct;
  for (int id : attachNodes) {
    if (!frame.nodes.count(id))
      throw std::invalid_argument("attach_superelement: frame node " + std::to_string(id) +
                                  " does not exist");
    if (!distinct.insert(id).second)
      throw std::invalid_argument("attach_superelement: node " + std::to_string(id) +
                                  " attached twice");
  }
  frame.superelements.push_back({Kk.K, attachNodes});
}

LocalBoundaryData extract_boundary_data(const GlobalSolution& sol,
                                        const std::vector<int>& attachNodes) {
  LocalBoundaryData data;
  data.reserve(attachNodes.size());
  for (int id : attachNodes) {
    auto it = sol.displacements.find(id);
    if (it == sol.displacements.end())
      throw std::invalid_argument("extract_boundary_data: node " + std::to_string(id) +
                                  " not present in the global solution");
    data.push_back(it->second);
  }
  return data;
}

namespace {

// Deterministic boundary-focused sample set: surface triangle vertices when
// the geometry carries a mesh, plus coarse volume quadrature points of the
// cut cells restricted to the material.
std::vector<Vec3> stressSamples(const fcm::CellGrid& grid, const Domain& domain) {
  std::vector<Vec3> pts;
  if (const TriangleSurface* surf = domain.surface()) {
    for (const Triangle& t : surf->triangles())
      for (const Vec3* v : {&t.v0, &t.v1, &t.v2}) {
        std::array<int, 3> cell;
        Vec3 xi;
        if (grid.locate(*v, cell, xi)) pts.push_back(*v);
      }
  }
  for (const auto& [i, j, k] : grid.activeCells()) {
    if (grid.status(i, j, k) != fcm::CellStatus::Cut) continue;
    for (const fcm::VolumePoint& q :
         fcm::cell_quadrature(domain, grid.cellBox(i, j, k), fcm::CellStatus::Cut, 1, 2))
      if (domain.inside(q.x)) pts.push_back(q.x);
  }
  return pts;
}

}  // namespace

LocalStressResult local_stress_analysis(const SubstructureSpec& spec, const LocalBoundaryData& data,
                                        int threads, const CondensationWorkspace* workspace) {
  if (data.size() != spec.interfaces.size())
    throw std::invalid_argument("local_stress_analysis: boundary data incomplete");

  LocalStressResult out;
  const fcm::SparseSym* K = nullptr;
  fcm::SparseSym ownK;

  if (workspace && workspace->grid && workspace->basis.N.cols() == spec.numBoundaryDofs()) {
    out.grid = workspace->grid;
    Eigen::VectorXd b(spec.numBoundaryDofs());
    for (size_t s = 0; s < data.size(); ++s) b.segment<6>(6 * s) = data[s];
    out.coefficients = workspace->basis.N * b;
    K = &workspace->stiffness;
  } else {
    fcm::GridParams gp;
    gp.resolution = spec.fcm.resolution;
    gp.p = spec.fcm.p;
    gp.margin = spec.fcm.margin;
    out.grid = std::make_shared<fcm::CellGrid>(spec.domain, gp);

    fcm::QuadratureScheme quad{spec.fcm.octreeDepth, 0};
    ownK = fcm::assemble_unconstrained(*out.grid, spec.domain, spec.domain.material(), quad,
                                       threads);
    K = &ownK;

    std::vector<Eigen::Triplet<double>> penaltyTrips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(out.grid->numDofs());
    for (size_t s = 0; s < spec.interfaces.size(); ++s) {
      fcm::SurfacePatch patch = fcm::patch_from_section(spec.interfaces[s]);
      fcm::penalty_dirichlet(*out.grid, patch, plane_section_field(spec.interfaces[s], data[s]),
                             spec.fcm.beta, penaltyTrips, rhs);
    }
    fcm::SparseSym penalty(out.grid->numDofs(), out.grid->numDofs());
    penalty.setFromTriplets(penaltyTrips.begin(), penaltyTrips.end());
    fcm::SparseSym A = ownK + penalty;
    fcm::Factorization fact(std::move(A));
    out.coefficients = fact.solve(rhs);
  }

  out.strainEnergy =
      0.5 * out.coefficients.dot(K->selfadjointView<Eigen::Lower>() * out.coefficients);

  fcm::ElasticField field(*out.grid, spec.domain.material(), out.coefficients);
  for (const Vec3& x : stressSamples(*out.grid, spec.domain)) {
    const double vm = field.evaluate(x).vonMises;
    if (vm > out.maxVonMises) {
      out.maxVonMises = vm;
      out.maxLocation = x;
    }
  }
  return out;
}

std::vector<PointError> pointwise_error(const std::function<Vec3(const Vec3&)>& uRef,
                                        const std::function<Vec3(const Vec3&)>& uTs,
                                        const std::vector<Vec3>& samples, double guard) {
  std::vector<PointError> out;
  out.reserve(samples.size());
  for (const Vec3& x : samples) {
    PointError e;
    e.x = x;
    const Vec3 r = uRef(x);
    const double rn = r.norm();
    if (rn >= guard) {
      e.defined = true;
      e.value = (r - uTs(x)).norm() / rn;
    }
    out.push_back(e);
  }
  return out;
}

double max_defined_error(const std::vector<PointError>& errors) {
  double m = 0.0;
  for (const PointError& e : errors)
    if (e.defined && e.value > m) m = e.value;
  return m;
}

JobReport run_job(const TwoScaleJob& job, int threads, const CondenseFn& condenser) {
  JobReport report;
  FrameModel frame = job.frame;

  std::vector<CondensationWorkspace> workspaces(job.substructures.size());
  std::vector<bool> haveWorkspace(job.substructures.size(), false);

  for (size_t s = 0; s < job.substructures.size(); ++s) {
    const SubstructureInstance& sub = job.substructures[s];
    SubstructureReport sr;
    sr.name = sub.name;
    if (sub.precomputed) {
      sr.condensed = *sub.precomputed;
    } else if (sub.spec) {
      if (condenser) {
        sr.condensed = condenser(*sub.spec, &workspaces[s]);
      } else {
        sr.condensed = compute_condensed(*sub.spec, threads, &workspaces[s]);
      }
      haveWorkspace[s] = bool(workspaces[s].grid);
    } else {
      throw std::invalid_argument("run_job: substructure '" + sub.name +
                                  "' has neither a spec nor a precomputed matrix");
    }
    try {
      attach_superelement(frame, sr.condensed, sub.attachNodes);
    } catch (const std::exception& e) {
      throw std::invalid_argument("run_job: stage attach, substructure '" + sub.name +
                                  "': " + e.what());
    }
    report.substructures.push_back(std::move(sr));
  }

  try {
    report.global = assemble_and_solve(frame);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run_job: stage global solve: ") + e.what());
  }
  for (const auto& [id, u] : report.global.displacements)
    report.maxDisplacement = std::max(report.maxDisplacement, u.head<3>().norm());

  for (size_t s = 0; s < job.substructures.size(); ++s) {
    const SubstructureInstance& sub = job.substructures[s];
    SubstructureReport& sr = report.substructures[s];
    sr.boundary = extract_boundary_data(report.global, sub.attachNodes);
    if (job.wantLocalStress && sub.spec) {
      try {
        sr.local = local_stress_analysis(*sub.spec, sr.boundary, threads,
                                         haveWorkspace[s] ? &workspaces[s] : nullptr);
      } catch (const std::exception& e) {
        throw std::runtime_error("run_job: stage local stress, substructure '" + sub.name +
                                 "': " + e.what());
      }
    }
  }
  return report;
}

}  // namespace framecell
