#include "rvd/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace rvd {

double ControlSequence::max_abs() const {
  double m = 0.0;
  for (const auto& uk : u) m = std::max(m, uk.cwiseAbs().maxCoeff());
  return m;
}

double ControlSequence::l1_norm() const {
  double s = 0.0;
  for (const auto& uk : u) s += uk.cwiseAbs().sum();
  return s;
}

ControlSequence ControlSequence::from_stacked_reverse(const Eigen::VectorXd& w) {
  if (w.size() % 3 != 0) throw std::invalid_argument("stacked input size must be a multiple of 3");
  const int N = static_cast<int>(w.size() / 3);
  ControlSequence seq;
  seq.u.resize(static_cast<size_t>(N));
  // Block j of w is u(k0+N-1-j); store chronologically.
  for (int j = 0; j < N; ++j) seq.u[static_cast<size_t>(N - 1 - j)] = w.segment<3>(3 * j);
  return seq;
}

Eigen::VectorXd ControlSequence::to_stacked_reverse() const {
  const int N = horizon();
  Eigen::VectorXd w(3 * N);
  for (int j = 0; j < N; ++j) w.segment<3>(3 * j) = u[static_cast<size_t>(N - 1 - j)];
  return w;
}

// ---------------------------------------------------------------------------
// Continuous model and exact discretization
// ---------------------------------------------------------------------------

std::pair<Mat6, Mat63> hcw_continuous() {
  Mat6 Ac = Mat6::Zero();
  Ac.topRightCorner<3, 3>() = Mat3::Identity();  // position derivatives = velocity
  Ac(3, 0) = 3.0;
  Ac(3, 4) = 2.0;
  Ac(4, 3) = -2.0;
  Ac(5, 2) = -1.0;
  Mat63 Bc = Mat63::Zero();
  Bc.bottomRows<3>() = Mat3::Identity();
  return {Ac, Bc};
}

DiscreteModel discretize(double tau_s) {
  if (!(tau_s >= 0.0) || !std::isfinite(tau_s)) {
    throw std::invalid_argument("tau_s must be finite and non-negative");
  }
  const auto [Ac, Bc] = hcw_continuous();
  // exp([[Ac, Bc], [0, 0]] * tau) packs A and the ZOH input integral into one call.
  Eigen::Matrix<double, 9, 9> M = Eigen::Matrix<double, 9, 9>::Zero();
  M.topLeftCorner<6, 6>() = Ac;
  M.topRightCorner<6, 3>() = Bc;
  Eigen::Matrix<double, 9, 9> E = (M * tau_s).exp();

  DiscreteModel model;
  model.A = E.topLeftCorner<6, 6>();
  model.B = E.topRightCorner<6, 3>();
  model.tau_s = tau_s;
  return model;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

NormalizedState normalize(const PhysicalRelativeState& s, const ScenarioScales& scales) {
  NormalizedState x;
  x.position() = (scales.eta * scales.eta / scales.a_max) * s.p;
  x.velocity() = (scales.eta / scales.a_max) * s.v;
  return x;
}

PhysicalRelativeState denormalize(const NormalizedState& x, const ScenarioScales& scales) {
  PhysicalRelativeState s;
  s.p = (scales.a_max / (scales.eta * scales.eta)) * x.position();
  s.v = (scales.a_max / scales.eta) * x.velocity();
  return s;
}

// ---------------------------------------------------------------------------
// Propagation and reachability
// ---------------------------------------------------------------------------

std::vector<NormalizedState> propagate(const DiscreteModel& model, const NormalizedState& x0,
                                       const ControlSequence& u) {
  std::vector<NormalizedState> out;
  out.reserve(u.u.size() + 1);
  out.push_back(x0);
  for (const auto& uk : u.u) {
    NormalizedState next;
    next.x = model.A * out.back().x + model.B * uk;
    out.push_back(next);
  }
  return out;
}

ReachabilityTable ReachabilityTable::build(const DiscreteModel& model, int N_ub) {
  if (N_ub < 1) throw std::invalid_argument("N_ub must be at least 1");
  ReachabilityTable table;
  table.N_ub = N_ub;
  table.powers.resize(static_cast<size_t>(N_ub) + 1);
  table.powers[0] = Mat6::Identity();
  for (int n = 1; n <= N_ub; ++n) table.powers[static_cast<size_t>(n)] = model.A * table.powers[static_cast<size_t>(n - 1)];

  table.reach.resize(static_cast<size_t>(N_ub) + 1);
  table.pinv.resize(static_cast<size_t>(N_ub) + 1);
  Eigen::MatrixXd full(6, 3 * N_ub);
  for (int j = 0; j < N_ub; ++j) full.middleCols<3>(3 * j) = table.powers[static_cast<size_t>(j)] * model.B;

  for (int N = 1; N <= N_ub; ++N) {
    table.reach[static_cast<size_t>(N)] = full.leftCols(3 * N);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(table.reach[static_cast<size_t>(N)],
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = 1e-12 * sv(0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    }
    table.pinv[static_cast<size_t>(N)] =
        svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  }
  return table;
}

MinEnergyResult min_energy(const ReachabilityTable& table, const NormalizedState& x0,
                           const NormalizedState& xd, int N) {
  if (N < 1 || N > table.N_ub) throw std::invalid_argument("min_energy: N out of table range");
  const Vec6 gap = xd.x - table.power(N) * x0.x;
  MinEnergyResult res;
  res.e = table.pinv_at(N) * gap;
  res.residual = (table.reach_at(N) * res.e - gap).norm();
  return res;
}

}  // namespace rvd
