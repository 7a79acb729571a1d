/**
 * @file constraints.hpp
 * @brief Per-step position constraint sets: rotating keep-out hyperplane
 *        during rendezvous, polyhedral approach corridor during docking.
 *
 * Every set is emitted as halfspace rows a'xi <= b on the normalized
 * position xi, ready for direct stacking into an LP.
 */
#pragma once

#include <limits>

#include "rvd/dynamics.hpp"
#include "rvd/target_motion.hpp"

namespace rvd {

struct HalfspaceSet {
  struct Row {
    Vec3 a = Vec3::Zero();
    double b = 0.0;
  };
  std::vector<Row> rows;

  bool contains(const Vec3& xi, double tol = 0.0) const {
    for (const auto& row : rows) {
      if (row.a.dot(xi) > row.b + tol) return false;
    }
    return true;
  }
  /// Signed worst-case margin: positive outside the set, negative strictly
  /// inside, -inf when the set has no rows.
  double max_violation(const Vec3& xi) const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows) v = std::max(v, row.a.dot(xi) - row.b);
    return v;
  }
};

/// Normalized keep-out radius, corridor half-angle, and docking-phase length.
struct ConstraintScheduleParams {
  double r = 0.0;      ///< keep-out radius, normalized units
  double alpha = 0.0;  ///< corridor half-angle [rad], in (0, pi/2)
  int N_d = 0;         ///< docking steps at the end of the horizon
};

/**
 * Unit normal of the rendezvous hyperplane at step k: the initial position
 * direction rotated along the great circle towards the docking direction at
 * the phase handoff, by the fraction (k - k0) / lambda_N of the full arc.
 * Antiparallel endpoints rotate about a deterministic orthogonal axis.
 */
Vec3 hyperplane_normal(const Vec3& xp0, const Vec3& xpd_end, int k, int k0, int lambda_N);

/// Single row: nu'xi >= r, i.e. -nu'xi <= -r.
HalfspaceSet rendezvous_halfspace(const Vec3& nu, double r);

/// Orthonormal T with T * xpd_hat = e1 (rotation about xpd_hat x e1).
Mat3 docking_rotation(const Vec3& xpd_hat);

/**
 * Inner polyhedral corridor: ||T(xi - (xi'xh)xh)||_inf <= tan(alpha)/sqrt(2)
 * * (xi - xpd)'xh with xh the docking direction.  Six rows; the pair
 * projecting onto e1 degenerates to the forward halfspace (xi - xpd)'xh >= 0
 * and is emitted anyway to keep the row structure uniform.
 */
HalfspaceSet docking_polytope(const Vec3& xpd, double alpha);

/// Constraint set for step k of an N-step plan: rendezvous halfspace while
/// k - k0 < lambda_N = N - N_d, docking corridor afterwards.
HalfspaceSet schedule(int k, int N, const ConstraintScheduleParams& params,
                      const NormalizedState& x0, const ReferenceTrajectory& reference);

}  // namespace rvd
