#pragma once

#include <Eigen/Dense>

namespace bestab {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Sum of the three principal 2x2 minors (second invariant of M).
inline double principal_minor_sum(const Mat3& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) +
         m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
         m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
}

}  // namespace bestab
