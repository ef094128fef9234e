#include "framecell/scenarios.hpp"

#include <cmath>

namespace framecell::scenarios {

namespace {

int nodeId(double x, double elementLength) { return int(std::lround(x / elementLength)); }

}  // namespace

SubstructureSpec cantilever_segment_spec(const CantileverConfig& cfg) {
  const Vec3 b(cfg.lenAB, 0, 0);
  const Vec3 c(cfg.lenAB + cfg.lenBC, 0, 0);

  SubstructureSpec spec{
      Domain(ImplicitShape::hollowCylinder(b, c, cfg.rIn, cfg.rOut), cfg.material), {}, {}};

  InterfaceSection atB;
  atB.centroid = b;
  atB.normal = Vec3(-1, 0, 0);
  atB.shape = cfg.rOut;
  atB.globalNodeId = nodeId(b.x(), cfg.elementLength);
  InterfaceSection atC = atB;
  atC.centroid = c;
  atC.normal = Vec3(1, 0, 0);
  atC.globalNodeId = nodeId(c.x(), cfg.elementLength);
  spec.interfaces = {atB, atC};

  spec.fcm.resolution = cfg.resolution();
  spec.fcm.p = 3;
  spec.fcm.octreeDepth = cfg.octreeDepth();
  return spec;
}

namespace {

FrameModel cantileverFrame(const CantileverConfig& cfg, bool beamAcrossBC) {
  const double xB = cfg.lenAB;
  const double xC = cfg.lenAB + cfg.lenBC;
  const double xD = cfg.lenAB + cfg.lenBC + cfg.lenCD;

  FrameModel m;
  const CrossSection solid = section_circular(cfg.rSolid, cfg.material.nu);
  const CrossSection hollow = section_hollow_circular(cfg.rIn, cfg.rOut, cfg.material.nu);

  auto addRun = [&](double x0, double x1, const CrossSection& sec) {
    const int n = std::max(1, int(std::lround((x1 - x0) / cfg.elementLength)));
    for (int i = 0; i <= n; ++i) {
      const double x = x0 + (x1 - x0) * i / n;
      m.nodes.emplace(nodeId(x, cfg.elementLength), Vec3(x, 0, 0));
    }
    for (int i = 0; i < n; ++i) {
      BeamElement e;
      e.nodeA = nodeId(x0 + (x1 - x0) * i / n, cfg.elementLength);
      e.nodeB = nodeId(x0 + (x1 - x0) * (i + 1) / n, cfg.elementLength);
      e.material = cfg.material;
      e.section = sec;
      m.elements.push_back(e);
    }
  };
  addRun(0.0, xB, solid);
  if (beamAcrossBC) addRun(xB, xC, hollow);
  addRun(xC, xD, solid);

  m.supports[nodeId(0.0, cfg.elementLength)] = {true, true, true, true, true, true};
  Vec6 tip = Vec6::Zero();
  tip[1] = cfg.tipForceY;
  tip[5] = cfg.tipMomentZ;
  m.loads[nodeId(xD, cfg.elementLength)] = tip;
  return m;
}

}  // namespace

FrameModel cantilever_reference(const CantileverConfig& cfg) { return cantileverFrame(cfg, true); }

TwoScaleJob cantilever_job(const CantileverConfig& cfg) {
  TwoScaleJob job;
  job.frame = cantileverFrame(cfg, false);
  job.wantLocalStress = false;

  SubstructureInstance inst;
  inst.name = "segment-BC";
  inst.spec = cantilever_segment_spec(cfg);
  for (const InterfaceSection& s : inst.spec->interfaces)
    inst.attachNodes.push_back(s.globalNodeId);
  job.substructures.push_back(std::move(inst));
  return job;
}

CantileverResult run_cantilever(const CantileverConfig& cfg, int threads) {
  CantileverResult r;
  r.reference = assemble_and_solve(cantilever_reference(cfg));

  TwoScaleJob job = cantilever_job(cfg);
  JobReport report = run_job(job, threads);
  r.twoScale = report.global;
  r.condensed = report.substructures.at(0).condensed;

  // Error at the beam nodes both discretizations share, by construction all
  // nodes of the two-scale frame.
  std::vector<Vec3> samples;
  for (const auto& [id, x] : job.frame.nodes) samples.push_back(x);

  auto sampler = [&cfg](const GlobalSolution& sol) {
    return [&cfg, &sol](const Vec3& x) -> Vec3 {
      return sol.displacements.at(nodeId(x.x(), cfg.elementLength)).head<3>();
    };
  };
  r.errors = pointwise_error(sampler(r.reference), sampler(r.twoScale), samples);
  r.maxError = max_defined_error(r.errors);
  return r;
}

SubstructureSpec star_node_spec(const StarNodeConfig& cfg) {
  const Vec3 o = Vec3::Zero();
  const std::array<Vec3, 5> dirs = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0),
                                    Vec3(0, 0, 1)};

  ImplicitShape core = ImplicitShape::sphere(o, cfg.sphereRadius);
  if (cfg.thinShell) core = core.subtract(ImplicitShape::sphere(o, cfg.shellInnerRadius));
  ImplicitShape shape = core;
  for (const Vec3& d : dirs)
    shape = shape.unite(ImplicitShape::cylinder(o, o + cfg.armLength * d, cfg.armRadius));

  SubstructureSpec spec{Domain(std::move(shape), cfg.material), {}, {}};
  for (size_t i = 0; i < dirs.size(); ++i) {
    InterfaceSection s;
    s.centroid = cfg.armLength * dirs[i];
    s.normal = dirs[i];
    s.shape = cfg.armRadius;
    s.globalNodeId = 101 + int(i);
    spec.interfaces.push_back(s);
  }
  spec.fcm.resolution = cfg.resolution;
  spec.fcm.p = cfg.p;
  spec.fcm.octreeDepth = cfg.octreeDepth;
  return spec;
}

TwoScaleJob star_frame_job(const StarNodeConfig& cfg, const Vec3& topForce) {
  TwoScaleJob job;
  FrameModel& m = job.frame;

  SubstructureInstance inst;
  inst.name = cfg.thinShell ? "star-node-thin" : "star-node-thick";
  inst.spec = star_node_spec(cfg);

  const double reach = 300.0;
  const CrossSection sec = section_circular(cfg.armRadius, cfg.material.nu);
  int outerId = 201;
  for (const InterfaceSection& s : inst.spec->interfaces) {
    m.nodes.emplace(s.globalNodeId, s.centroid);
    inst.attachNodes.push_back(s.globalNodeId);

    const Vec3 outer = s.normal * reach;
    m.nodes.emplace(outerId, outer);
    BeamElement e;
    e.nodeA = s.globalNodeId;
    e.nodeB = outerId;
    e.material = cfg.material;
    e.section = sec;
    // reference vector must not align with the beam axis
    e.refVec = std::abs(s.normal.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
    m.elements.push_back(e);

    if (std::abs(s.normal.z()) > 0.9) {
      Vec6 f = Vec6::Zero();
      f.head<3>() = topForce;
      m.loads[outerId] = f;
    } else {
      m.supports[outerId] = {true, true, true, true, true, true};
    }
    ++outerId;
  }
  job.substructures.push_back(std::move(inst));
  return job;
}

}  // namespace framecell::scenarios
