/**
 * @file dynamics.hpp
 * @brief Normalized discrete-time relative orbital dynamics in the RTN frame.
 *
 * States are normalized so that the control authority is the unit box:
 * position scales by eta^2/a_max, velocity by eta/a_max, and time runs in
 * scaled units tau = eta*t with one sample every tau_s scaled seconds.
 */
#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace rvd {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

/// Orbit, actuation, and sampling scales shared by every module.
struct ScenarioScales {
  double eta = 0.0;    ///< mean motion of the target orbit [rad/s]
  double a_max = 0.0;  ///< per-axis thrust acceleration bound [m/s^2]
  double tau_s = 0.0;  ///< sampling interval in scaled time [rad/sample]
  int k0 = 0;          ///< first discrete index of the plan
  double t0 = 0.0;     ///< physical epoch of sample k0 [s]

  /// Physical seconds between consecutive samples.
  double sample_dt() const { return tau_s / eta; }
  /// Physical time of sample k.
  double time_at(int k) const { return t0 + (k - k0) * sample_dt(); }
};

/// Chaser state relative to the target center of mass, RTN frame, SI units.
struct PhysicalRelativeState {
  Vec3 p = Vec3::Zero();  ///< position [m]
  Vec3 v = Vec3::Zero();  ///< velocity [m/s]
};

/// Dimensionless state; admissible accelerations live in the unit box.
struct NormalizedState {
  Vec6 x = Vec6::Zero();

  Eigen::Ref<Vec3> position() { return x.head<3>(); }
  Eigen::Ref<const Vec3> position() const { return x.head<3>(); }
  Eigen::Ref<Vec3> velocity() { return x.tail<3>(); }
  Eigen::Ref<const Vec3> velocity() const { return x.tail<3>(); }
};

/// Chronologically ordered control inputs u(k0), u(k0+1), ...
struct ControlSequence {
  std::vector<Vec3> u;

  int horizon() const { return static_cast<int>(u.size()); }
  double max_abs() const;
  double l1_norm() const;
  bool admissible(double tol = 0.0) const { return max_abs() <= 1.0 + tol; }

  /// Reverse-block stacking convention used by the reachability matrix:
  /// the stacked vector is [u(k0+N-1); ...; u(k0)].
  static ControlSequence from_stacked_reverse(const Eigen::VectorXd& w);
  Eigen::VectorXd to_stacked_reverse() const;
};

/// Exact zero-order-hold discretization x(k+1) = A x(k) + B u(k).
struct DiscreteModel {
  Mat6 A = Mat6::Zero();
  Mat63 B = Mat63::Zero();
  double tau_s = 0.0;
};

/**
 * Cached powers of A, reachability matrices R_N = [B, A B, ..., A^{N-1} B],
 * and their pseudoinverses for N = 1..N_ub.  Column block j of R_N multiplies
 * u(k0+N-1-j), i.e. the leading B block pairs with the final input.
 */
struct ReachabilityTable {
  int N_ub = 0;
  std::vector<Mat6> powers;              ///< powers[n] = A^n, n = 0..N_ub
  std::vector<Eigen::MatrixXd> reach;    ///< reach[N] = R_N, N = 1..N_ub ([0] empty)
  std::vector<Eigen::MatrixXd> pinv;     ///< pinv[N] = R_N^+ (SVD cutoff 1e-12 * sigma_max)

  static ReachabilityTable build(const DiscreteModel& model, int N_ub);

  const Mat6& power(int n) const { return powers.at(static_cast<size_t>(n)); }
  const Eigen::MatrixXd& reach_at(int N) const { return reach.at(static_cast<size_t>(N)); }
  const Eigen::MatrixXd& pinv_at(int N) const { return pinv.at(static_cast<size_t>(N)); }
};

/// Continuous-time normalized relative-motion matrices (A_c, B_c).
std::pair<Mat6, Mat63> hcw_continuous();

/// Exact discretization over one sampling interval via the augmented exponential.
DiscreteModel discretize(double tau_s);

NormalizedState normalize(const PhysicalRelativeState& s, const ScenarioScales& scales);
PhysicalRelativeState denormalize(const NormalizedState& x, const ScenarioScales& scales);

/// Roll the model forward; returns N+1 states starting with x0.
std::vector<NormalizedState> propagate(const DiscreteModel& model, const NormalizedState& x0,
                                       const ControlSequence& u);

/// Least-squares minimum-energy input transferring x0 to xd in N steps.
struct MinEnergyResult {
  Eigen::VectorXd e;  ///< stacked reverse-chronological input, size 3N
  double residual;    ///< || A^N x0 + R_N e - xd ||_2
};
MinEnergyResult min_energy(const ReachabilityTable& table, const NormalizedState& x0,
                           const NormalizedState& xd, int N);

}  // namespace rvd
