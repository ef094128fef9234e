#pragma once

#include <random>
#include <vector>

#include "framecell/geometry.hpp"

namespace framecell::testing {

/// Axis-aligned box as 12 outward-facing triangles.
inline std::vector<Triangle> boxTriangles(const Vec3& lo, const Vec3& hi) {
  auto v = [&](int mask) {
    return Vec3(mask & 1 ? hi.x() : lo.x(), mask & 2 ? hi.y() : lo.y(),
                mask & 4 ? hi.z() : lo.z());
  };
  // Each face as two triangles, consistently wound outward.
  const int faces[6][4] = {
      {0, 4, 6, 2},  // x = lo
      {1, 3, 7, 5},  // x = hi
      {0, 1, 5, 4},  // y = lo
      {2, 6, 7, 3},  // y = hi
      {0, 2, 3, 1},  // z = lo
      {4, 5, 7, 6},  // z = hi
  };
  std::vector<Triangle> tris;
  for (const auto& f : faces) {
    tris.push_back({v(f[0]), v(f[1]), v(f[2])});
    tris.push_back({v(f[0]), v(f[2]), v(f[3])});
  }
  return tris;
}

inline Mat3 randomRotation(std::mt19937& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace framecell::testing
