#include "rvd/transcription.hpp"

#include <cmath>
#include <string>

namespace rvd {

// ---------------------------------------------------------------------------
// Context assembly
// ---------------------------------------------------------------------------

PlanningContext make_context(const ScenarioConfig& config) {
  PlanningContext ctx;
  ctx.model = discretize(config.tau_s);
  ctx.table = ReachabilityTable::build(ctx.model, config.N_ub);
  ctx.reference = build_reference(config.p0_docking, config.spin, config.scales(), config.N_ub);
  ctx.params = config.constraint_params();
  ctx.x0 = config.x0_normalized();
  ctx.k0 = config.k0;
  ctx.N_ub = config.N_ub;
  ctx.tol = config.tol;
  return ctx;
}

// ---------------------------------------------------------------------------
// LP assembly
// ---------------------------------------------------------------------------

namespace {

void check_horizon(const PlanningContext& ctx, int N) {
  if (N < 1 || N > ctx.N_ub) {
    throw SolverFault("horizon " + std::to_string(N) + " outside [1, " + std::to_string(ctx.N_ub) +
                      "]");
  }
  if (ctx.reference.last_index() < ctx.k0 + N) {
    throw SolverFault("reference trajectory shorter than horizon");
  }
}

}  // namespace

LpProblem build_lp_with_steps(const PlanningContext& ctx, const std::vector<HalfspaceSet>& steps,
                              int N, double gamma, LpBuildInfo* info) {
  check_horizon(ctx, N);
  if (static_cast<int>(steps.size()) != N) {
    throw SolverFault("expected one constraint set per step");
  }

  const int nu = 3 * N;   // control variables, chronological blocks
  const int n = 2 * nu;   // plus one epigraph slack per control component
  const int m_epi = 2 * nu;
  int m_state = 0;
  for (const auto& set : steps) m_state += static_cast<int>(set.rows.size());

  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(n);
  lp.c.tail(nu).setConstant(gamma);
  lp.lb = Eigen::VectorXd::Zero(n);
  lp.ub = Eigen::VectorXd::Zero(n);
  lp.lb.head(nu).setConstant(-1.0);
  lp.ub.head(nu).setConstant(1.0);
  lp.ub.tail(nu).setConstant(std::numeric_limits<double>::infinity());

  lp.A_ub = Eigen::MatrixXd::Zero(m_epi + m_state, n);
  lp.b_ub = Eigen::VectorXd::Zero(m_epi + m_state);

  // Epigraph pairs: u_j - s_j <= 0 and -u_j - s_j <= 0.
  for (int j = 0; j < nu; ++j) {
    lp.A_ub(2 * j, j) = 1.0;
    lp.A_ub(2 * j, nu + j) = -1.0;
    lp.A_ub(2 * j + 1, j) = -1.0;
    lp.A_ub(2 * j + 1, nu + j) = -1.0;
  }

  // Step responses: impulse[m] maps u into the position m+1 samples later,
  // drift[i] is the uncontrolled position at step k0 + i.
  std::vector<Eigen::Matrix<double, 3, 3>> impulse(static_cast<size_t>(N));
  for (int m = 0; m < N; ++m) {
    impulse[static_cast<size_t>(m)] = (ctx.table.power(m) * ctx.model.B).topRows<3>();
  }
  std::vector<Vec3> drift(static_cast<size_t>(N + 1));
  for (int i = 0; i <= N; ++i) {
    drift[static_cast<size_t>(i)] = (ctx.table.power(i) * ctx.x0.x).head<3>();
  }

  int row = m_epi;
  for (int i = 0; i < N; ++i) {
    for (const auto& hs : steps[static_cast<size_t>(i)].rows) {
      for (int j = 0; j < i; ++j) {
        lp.A_ub.block<1, 3>(row, 3 * j) = hs.a.transpose() * impulse[static_cast<size_t>(i - 1 - j)];
      }
      lp.b_ub(row) = hs.b - hs.a.dot(drift[static_cast<size_t>(i)]);
      ++row;
    }
  }

  // Terminal equality: x(k0 + N) matches the docking-point state.
  lp.A_eq = Eigen::MatrixXd::Zero(6, n);
  lp.b_eq = ctx.reference.at(ctx.k0 + N).x - ctx.table.power(N) * ctx.x0.x;
  for (int j = 0; j < N; ++j) {
    lp.A_eq.block<6, 3>(0, 3 * j) = ctx.table.power(N - 1 - j) * ctx.model.B;
  }

  if (info != nullptr) {
    info->vars = n;
    info->epigraph_rows = m_epi;
    info->state_rows = m_state;
    info->eq_rows = 6;
  }
  return lp;
}

LpProblem build_lp(const PlanningContext& ctx, int N, double gamma, LpBuildInfo* info) {
  check_horizon(ctx, N);
  std::vector<HalfspaceSet> steps;
  steps.reserve(static_cast<size_t>(N));
  for (int k = ctx.k0; k < ctx.k0 + N; ++k) {
    steps.push_back(schedule(k, N, ctx.params, ctx.x0, ctx.reference));
  }
  return build_lp_with_steps(ctx, steps, N, gamma, info);
}

// ---------------------------------------------------------------------------
// Fixed-horizon solve with replay verification
// ---------------------------------------------------------------------------

FixedHorizonSolution solve_fixed_horizon(const PlanningContext& ctx, int N, double gamma) {
  const LpProblem lp = build_lp(ctx, N, gamma);
  LpOptions options;
  options.feas_tol = ctx.tol.lp_feas;
  options.opt_tol = ctx.tol.lp_opt;
  const LpSolution sol = solve(lp, options);

  FixedHorizonSolution out;
  out.N = N;
  if (sol.status == LpStatus::Infeasible) {
    out.status = FixedHorizonSolution::Status::Infeasible;
    return out;
  }
  if (sol.status != LpStatus::Optimal) {
    throw SolverFault("fixed-horizon solve ended with status " +
                      std::to_string(static_cast<int>(sol.status)));
  }

  out.status = FixedHorizonSolution::Status::Optimal;
  out.u.u.resize(static_cast<size_t>(N));
  for (int j = 0; j < N; ++j) out.u.u[static_cast<size_t>(j)] = sol.z.segment<3>(3 * j);
  out.fuel = out.u.l1_norm();
  out.J = static_cast<double>(N) + gamma * out.fuel;
  out.states = propagate(ctx.model, ctx.x0, out.u);

  // Replay check: the reconstructed trajectory must satisfy every constraint
  // the LP enforced, independently of the solver's own bookkeeping.
  const double tol = ctx.tol.reverify;
  if (!out.u.admissible(tol)) throw SolverFault("replay: control outside the unit box");
  for (int k = ctx.k0; k < ctx.k0 + N; ++k) {
    const HalfspaceSet set = schedule(k, N, ctx.params, ctx.x0, ctx.reference);
    const Vec3 xi = out.states[static_cast<size_t>(k - ctx.k0)].position();
    if (!set.contains(xi, tol)) {
      throw SolverFault("replay: position constraint violated at step " + std::to_string(k));
    }
  }
  const Vec6 gap = out.states[static_cast<size_t>(N)].x - ctx.reference.at(ctx.k0 + N).x;
  if (gap.lpNorm<Eigen::Infinity>() > tol) {
    throw SolverFault("replay: terminal state misses the docking point");
  }
  return out;
}

}  // namespace rvd
