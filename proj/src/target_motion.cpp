#include "rvd/target_motion.hpp"

#include "rvd/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace rvd {

namespace {

// Precession of the spin axis in RTN over (t - t0), rotation about the N axis.
Mat3 precession(double eta, double dt) {
  const double c = std::cos(eta * dt);
  const double s = std::sin(eta * dt);
  Mat3 M;
  M << c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0;
  return M;
}

// One classical RK4 step of dp/dt = omega(t) x p.
Vec3 rk4_step(const SpinModel& spin, double t0, double eta, const Vec3& p, double t, double h) {
  const Vec3 k1 = omega_at(spin, t, t0, eta).cross(p);
  const Vec3 k2 = omega_at(spin, t + 0.5 * h, t0, eta).cross(p + 0.5 * h * k1);
  const Vec3 k3 = omega_at(spin, t + 0.5 * h, t0, eta).cross(p + 0.5 * h * k2);
  const Vec3 k4 = omega_at(spin, t + h, t0, eta).cross(p + h * k3);
  return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vec3 omega_at(const SpinModel& spin, double t, double t0, double eta) {
  switch (spin.variant) {
    case SpinVariant::ConstantRtnRate:
      return spin.omega0;
    case SpinVariant::InertiallyFixedAxis:
      return precession(eta, t - t0) * spin.omega0;
  }
  throw std::logic_error("omega_at: unknown spin variant");
}

DockingPointState propagate_docking_point(const Vec3& p0, const SpinModel& spin, double t0,
                                          double t, double eta) {
  const double radius = p0.norm();
  if (!(radius > 0.0)) throw std::invalid_argument("propagate_docking_point: ||p0|| must be > 0");

  DockingPointState out;
  const double w = spin.omega0.norm();
  if (spin.variant == SpinVariant::ConstantRtnRate) {
    out.p_d = (w > 0.0) ? Vec3(rotation_about_axis(spin.omega0, w * (t - t0)) * p0) : p0;
  } else if (w == 0.0) {
    out.p_d = p0;
  } else {
    // Fixed substep capped at a thousandth of the spin period; the rate
    // magnitude is constant for this variant so the cap is exact.
    const double span = t - t0;
    const double h_max = (2.0 * M_PI / w) / 1000.0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / h_max)));
    const double h = span / steps;
    Vec3 p = p0;
    double tk = t0;
    for (int i = 0; i < steps; ++i) {
      p = rk4_step(spin, t0, eta, p, tk, h);
      tk += h;
    }
    out.p_d = p * (radius / p.norm());
  }
  out.v_d = omega_at(spin, t, t0, eta).cross(out.p_d);
  return out;
}

ReferenceTrajectory build_reference(const Vec3& p0, const SpinModel& spin,
                                    const ScenarioScales& scales, int N_ub) {
  if (N_ub < 1) throw std::invalid_argument("build_reference: N_ub must be at least 1");
  const double radius = p0.norm();
  if (!(radius > 0.0)) throw std::invalid_argument("build_reference: ||p0|| must be > 0");

  ReferenceTrajectory ref;
  ref.scales = scales;
  ref.samples.resize(static_cast<size_t>(N_ub) + 1);

  const double w = spin.omega0.norm();
  const bool stepwise = (spin.variant == SpinVariant::InertiallyFixedAxis) && w > 0.0;

  Vec3 p = p0;
  for (int i = 0; i <= N_ub; ++i) {
    const int k = scales.k0 + i;
    const double t = scales.time_at(k);
    if (stepwise) {
      if (i > 0) {
        // Integrate sample-to-sample and renormalize each macro step.
        const double t_prev = scales.time_at(k - 1);
        const double h_max = (2.0 * M_PI / w) / 1000.0;
        const int steps = std::max(1, static_cast<int>(std::ceil((t - t_prev) / h_max)));
        const double h = (t - t_prev) / steps;
        double tk = t_prev;
        for (int s = 0; s < steps; ++s) {
          p = rk4_step(spin, scales.t0, scales.eta, p, tk, h);
          tk += h;
        }
        p *= radius / p.norm();
      }
    } else {
      p = (w > 0.0) ? Vec3(rotation_about_axis(spin.omega0, w * (t - scales.t0)) * p0) : p0;
    }
    PhysicalRelativeState phys;
    phys.p = p;
    phys.v = omega_at(spin, t, scales.t0, scales.eta).cross(p);
    ref.samples[static_cast<size_t>(i)] = normalize(phys, scales);
  }
  return ref;
}

}  // namespace rvd
