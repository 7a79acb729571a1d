/**
 * @file scenario.hpp
 * @brief Planner configuration: physical quantities in SI units at the
 *        boundary, normalized internally.
 */
#pragma once

#include "rvd/constraints.hpp"
#include "rvd/dynamics.hpp"
#include "rvd/target_motion.hpp"

#include <stdexcept>
#include <string>

namespace rvd {

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Tolerances {
  double lp_feas = 1e-8;
  double lp_opt = 1e-8;
  double membership = 1e-7;  ///< reachability-equality residual, inf-norm
  double reverify = 1e-7;    ///< replay check on reconstructed states
};

struct ScenarioConfig {
  std::string name;

  double eta = 0.0;    ///< [rad/s]
  double a_max = 0.0;  ///< [m/s^2]
  double tau_s = 0.0;  ///< [rad/sample]
  int k0 = 0;
  double t0 = 0.0;  ///< [s]

  Vec3 p0_docking = Vec3::Zero();  ///< docking point at t0 [m]
  SpinModel spin;

  Vec3 p0_rel = Vec3::Zero();  ///< chaser position at k0 [m]
  Vec3 v0_rel = Vec3::Zero();  ///< chaser velocity at k0 [m/s]

  double alpha_deg = 0.0;       ///< corridor half-angle [deg]
  double keepout_radius = 0.0;  ///< [m]
  int N_d = 0;
  double gamma = 0.0;
  int N_ub = 0;

  Tolerances tol;

  ScenarioScales scales() const { return {eta, a_max, tau_s, k0, t0}; }
  double alpha_rad() const { return alpha_deg * M_PI / 180.0; }
  double r_normalized() const { return eta * eta / a_max * keepout_radius; }
  NormalizedState x0_normalized() const { return normalize({p0_rel, v0_rel}, scales()); }
  ConstraintScheduleParams constraint_params() const {
    return {r_normalized(), alpha_rad(), N_d};
  }
};

/// Throws ScenarioError naming the offending field.
void validate_scenario(const ScenarioConfig& config);

/// Parses and validates a scenario JSON file.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace rvd
