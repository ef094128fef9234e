#pragma once

#include <Eigen/Dense>

// Units used throughout: lengths in mm, forces in N, moduli in MPa,
// moments in N*mm, rotations in rad.

namespace framecell {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Axis-aligned bounding box.
struct Box {
  Vec3 lo{Vec3::Zero()};
  Vec3 hi{Vec3::Zero()};

  Vec3 extent() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }

  bool contains(const Vec3& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }

  void extend(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  Box inflated(double margin) const { return {lo.array() - margin, hi.array() + margin}; }
};

}  // namespace framecell
