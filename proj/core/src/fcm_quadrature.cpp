#include "framecell/fcm/quadrature.hpp"

namespace framecell::fcm {

namespace {

void gaussBox(const Box& b, const GaussRule& rule, std::vector<VolumePoint>& out) {
  const Vec3 half = 0.5 * b.extent();
  const Vec3 mid = b.center();
  const double jac = half.prod();
  const int n = int(rule.points.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        VolumePoint q;
        q.x = mid + half.cwiseProduct(Vec3(rule.points[i], rule.points[j], rule.points[k]));
        q.weight = jac * rule.weights[i] * rule.weights[j] * rule.weights[k];
        out.push_back(q);
      }
}

// 15-point sample (corners, face centers, center) to decide subdivision.
bool subBoxIsCut(const Domain& domain, const Box& b) {
  int inside = 0, total = 0;
  auto probe = [&](const Vec3& p) {
    total++;
    if (domain.inside(p)) inside++;
  };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        probe(Vec3(i ? b.hi.x() : b.lo.x(), j ? b.hi.y() : b.lo.y(), k ? b.hi.z() : b.lo.z()));
  const Vec3 c = b.center();
  probe(c);
  probe({b.lo.x(), c.y(), c.z()});
  probe({b.hi.x(), c.y(), c.z()});
  probe({c.x(), b.lo.y(), c.z()});
  probe({c.x(), b.hi.y(), c.z()});
  probe({c.x(), c.y(), b.lo.z()});
  probe({c.x(), c.y(), b.hi.z()});
  return inside != 0 && inside != total;
}

void subdivide(const Domain& domain, const Box& b, int depthLeft, const GaussRule& rule,
               std::vector<VolumePoint>& out) {
  if (depthLeft == 0 || !subBoxIsCut(domain, b)) {
    gaussBox(b, rule, out);
    return;
  }
  const Vec3 c = b.center();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Box child;
        child.lo = Vec3(i ? c.x() : b.lo.x(), j ? c.y() : b.lo.y(), k ? c.z() : b.lo.z());
        child.hi = Vec3(i ? b.hi.x() : c.x(), j ? b.hi.y() : c.y(), k ? b.hi.z() : c.z());
        subdivide(domain, child, depthLeft - 1, rule, out);
      }
}

}  // namespace

std::vector<VolumePoint> cell_quadrature(const Domain& domain, const Box& cellBox,
                                         CellStatus status, int depth, int gaussPerDir) {
  if (depth < 0) throw std::invalid_argument("cell_quadrature: depth must be >= 0");
  const GaussRule& rule = gauss_rule(gaussPerDir);
  std::vector<VolumePoint> out;
  if (status == CellStatus::Cut)
    subdivide(domain, cellBox, depth, rule, out);
  else
    gaussBox(cellBox, rule, out);
  return out;
}

}  // namespace framecell::fcm
