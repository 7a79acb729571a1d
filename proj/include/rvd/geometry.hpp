// Small shared 3-D rotation helpers.
#pragma once

#include "rvd/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace rvd {

/// Rodrigues rotation about an arbitrary (non-zero) axis.
inline Mat3 rotation_about_axis(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw std::invalid_argument("rotation_about_axis: zero axis");
  const Vec3 a = axis / n;
  Mat3 K;
  K << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * (K * K);
}

/// Deterministic unit vector orthogonal to v: complete against the canonical
/// axis with the smallest |v| component (ties resolve to the lower index).
inline Vec3 orthogonal_unit(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("orthogonal_unit: zero vector");
  const Vec3 vh = v / n;
  int idx = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(vh(i)) < std::abs(vh(idx))) idx = i;
  }
  Vec3 e = Vec3::Zero();
  e(idx) = 1.0;
  const Vec3 w = e - e.dot(vh) * vh;
  return w / w.norm();
}

}  // namespace rvd
