/**
 * @file target_motion.hpp
 * @brief Tumbling-target docking-point kinematics and the sampled reference.
 *
 * The docking point obeys dp/dt = omega(t) x p in the RTN frame, so it moves
 * on the sphere of radius ||p(t0)||.  Two spin models are supported: a rate
 * vector fixed in RTN, and an inertially fixed axis that precesses in RTN at
 * the orbital rate.
 */
#pragma once

#include "rvd/dynamics.hpp"

namespace rvd {

enum class SpinVariant {
  ConstantRtnRate,      ///< omega(t) = omega0 in RTN
  InertiallyFixedAxis,  ///< omega(t) = Rz-precession(eta (t - t0)) * omega0
};

struct SpinModel {
  SpinVariant variant = SpinVariant::ConstantRtnRate;
  Vec3 omega0 = Vec3::Zero();  ///< [rad/s]
};

struct DockingPointState {
  Vec3 p_d = Vec3::Zero();  ///< [m]
  Vec3 v_d = Vec3::Zero();  ///< [m/s]
};

/// Normalized docking-point states sampled at the plan's discrete instants.
struct ReferenceTrajectory {
  ScenarioScales scales;
  std::vector<NormalizedState> samples;  ///< samples[i] is sample k0 + i

  const NormalizedState& at(int k) const { return samples.at(static_cast<size_t>(k - scales.k0)); }
  int last_index() const { return scales.k0 + static_cast<int>(samples.size()) - 1; }
};

/// Spin rate vector at physical time t.
Vec3 omega_at(const SpinModel& spin, double t, double t0, double eta);

/// Exact closed form for ConstantRtnRate; RK4 with norm renormalization for
/// InertiallyFixedAxis (substep bounded by a thousandth of the spin period).
DockingPointState propagate_docking_point(const Vec3& p0, const SpinModel& spin, double t0,
                                          double t, double eta);

/// Samples k0..k0+N_ub of the normalized docking-point state.
ReferenceTrajectory build_reference(const Vec3& p0, const SpinModel& spin,
                                    const ScenarioScales& scales, int N_ub);

}  // namespace rvd
