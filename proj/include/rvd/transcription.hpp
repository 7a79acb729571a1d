/**
 * @file transcription.hpp
 * @brief Condensed input-only LP transcription of the fixed-horizon problem.
 *
 * Decision vector z = [u(k0)..u(k0+N-1), s(k0)..s(k0+N-1)]: 3N controls plus
 * 3N l1-epigraph slacks.  The LP cost is gamma * sum(s); the additive horizon
 * term N is applied on readout.  Rows: epigraph pairs -s <= u <= s, the
 * scheduled position constraints condensed through the dynamics, and six
 * terminal equality rows.  The input box |u| <= 1 is carried by the variable
 * bounds.
 */
#pragma once

#include "rvd/constraints.hpp"
#include "rvd/dynamics.hpp"
#include "rvd/lp.hpp"
#include "rvd/scenario.hpp"
#include "rvd/target_motion.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvd {

/// Internal fault: a condition that indicates a bug rather than an
/// infeasible or ill-posed problem instance.
class SolverFault : public std::logic_error {
 public:
  explicit SolverFault(const std::string& msg) : std::logic_error(msg) {}
};

/// Everything a fixed-horizon solve needs, built once per scenario.
struct PlanningContext {
  DiscreteModel model;
  ReachabilityTable table;
  ReferenceTrajectory reference;
  ConstraintScheduleParams params;
  NormalizedState x0;
  int k0 = 0;
  int N_ub = 0;
  Tolerances tol;
};

PlanningContext make_context(const ScenarioConfig& config);

struct FixedHorizonSolution {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  int N = 0;
  double J = std::numeric_limits<double>::infinity();
  double fuel = std::numeric_limits<double>::infinity();
  ControlSequence u;                    ///< chronological, empty when infeasible
  std::vector<NormalizedState> states;  ///< x(k0)..x(k0+N), empty when infeasible

  bool feasible() const { return status == Status::Optimal; }
};

struct LpBuildInfo {
  int vars = 0;
  int epigraph_rows = 0;
  int state_rows = 0;
  int eq_rows = 0;
};

/// Explicit-schedule variant: steps[i] constrains the position at k0 + i.
LpProblem build_lp_with_steps(const PlanningContext& ctx, const std::vector<HalfspaceSet>& steps,
                              int N, double gamma, LpBuildInfo* info = nullptr);

/// Schedule built from the context's keep-out/corridor parameters.
LpProblem build_lp(const PlanningContext& ctx, int N, double gamma, LpBuildInfo* info = nullptr);

/// Solves the horizon-N LP and reconstructs + re-verifies the trajectory.
FixedHorizonSolution solve_fixed_horizon(const PlanningContext& ctx, int N, double gamma);

}  // namespace rvd
