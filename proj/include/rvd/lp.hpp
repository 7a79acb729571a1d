/**
 * @file lp.hpp
 * @brief Self-contained deterministic dense linear-programming kernel.
 *
 * Solves  min c'z  subject to  A_ub z <= b_ub,  A_eq z = b_eq,  lb <= z <= ub
 * with a two-phase bounded-variable revised simplex.  Phase 1 drives
 * artificial variables out of an initial slack basis; phase 2 prices with
 * Dantzig's rule and falls back to Bland's rule after a degenerate stall,
 * which guarantees finite termination.  Identical inputs produce bit-identical
 * results and pivot counts.
 */
#pragma once

#include <Eigen/Dense>

#include <string>

namespace rvd {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_ub;  ///< may have zero rows
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd A_eq;  ///< may have zero rows
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lb;  ///< -inf allowed
  Eigen::VectorXd ub;  ///< +inf allowed

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(b_ub.size() + b_eq.size()); }

  /// Throws std::invalid_argument on dimension mismatch or non-finite
  /// entries (infinite bounds excepted).
  void validate() const;
};

struct LpOptions {
  double feas_tol = 1e-8;
  double opt_tol = 1e-8;
  long max_iter = -1;  ///< -1 selects 50 * (rows + cols)
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd z;
  double objective = 0.0;
  Eigen::VectorXd y_ub;  ///< row duals; satisfy d_j = c_j - y'a_j at the final basis
  Eigen::VectorXd y_eq;
  long iterations = 0;
  double phase1_objective = 0.0;
};

LpSolution solve(const LpProblem& problem, const LpOptions& options = {});

enum class Feasibility { Feasible, Infeasible };

/// Phase-1 only: reports whether the constraint set is non-empty.
Feasibility check_feasible(const LpProblem& problem, const LpOptions& options = {});

/// Plain-text dump for offline debugging; full decimal precision.
void dump_problem(const LpProblem& problem, const std::string& path);

}  // namespace rvd
