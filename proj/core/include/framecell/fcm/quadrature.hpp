#pragma once

#include <vector>

#include "framecell/fcm/grid.hpp"
#include "framecell/geometry.hpp"

namespace framecell::fcm {

struct QuadratureScheme {
  int octreeDepth = 4;
  int gaussPointsPerDir = 0;  // 0 -> p + 1
};

/// One volume quadrature point in physical coordinates.
struct VolumePoint {
  Vec3 x;
  double weight;  // physical volume weight
};

/// Quadrature for one cell. Uncut inside cells get a single-level rule;
/// cut cells are recursively subdivided: only sub-cells whose samples
/// disagree are split further, leaves get the full Gauss rule and alpha is
/// left to be evaluated per point by the caller.
std::vector<VolumePoint> cell_quadrature(const Domain& domain, const Box& cellBox,
                                         CellStatus status, int depth, int gaussPerDir);

}  // namespace framecell::fcm
