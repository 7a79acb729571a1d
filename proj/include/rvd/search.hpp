/**
 * @file search.hpp
 * @brief Variable-horizon outer optimization over the fixed-horizon LP.
 *
 * The horizon set is pruned with a minimum-energy reachability test, an
 * initial guess is picked from the pruned set, and a local search (expanding
 * feasibility ring, then monotone cost descent over the set's index order)
 * returns a locally optimal horizon.  Full enumeration and a logarithmic
 * ternary-search baseline are provided for comparison studies.
 */
#pragma once

#include "rvd/transcription.hpp"

#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace rvd {

// ---------------------------------------------------------------------------
// Horizon pruning
// ---------------------------------------------------------------------------

/// Candidate horizons and their cached minimum-energy data.  A horizon N is
/// kept iff the terminal equality is solvable (infinity-norm residual within
/// tol.membership) and the least-squares input e_N satisfies the admissibility
/// bound ||e_N||_2 <= sqrt(3N); any input in the unit box obeys that bound, so
/// horizons failing it cannot have admissible solutions.
struct FeasibilityAnalysis {
  int N_ub = 0;
  std::vector<int> F;                 ///< ascending candidate horizons
  std::vector<Eigen::VectorXd> e;     ///< minimum-energy input per member of F
  std::vector<double> e_l1;           ///< ||e_N||_1 per member of F
  std::vector<double> e_l2;           ///< ||e_N||_2 per member of F

  bool contains(int N) const;
  int index_of(int N) const;  ///< index into F, or -1
};

FeasibilityAnalysis feasible_set(const ReachabilityTable& table, const NormalizedState& x0,
                                 const ReferenceTrajectory& reference, int k0, int N_ub,
                                 double tol);
FeasibilityAnalysis feasible_set(const PlanningContext& ctx);

/// argmin over F of N + gamma * ||e_N||_1, ties to the smaller N.
int initial_guess(const FeasibilityAnalysis& fa, double gamma);

// ---------------------------------------------------------------------------
// Fixed-horizon evaluation with memoization
// ---------------------------------------------------------------------------

struct HorizonCost {
  bool feasible = false;
  double J = std::numeric_limits<double>::infinity();
  double fuel = std::numeric_limits<double>::infinity();
};

/// Memoizing evaluator of the per-horizon optimal cost.  Derived classes
/// supply the actual solve; the base class guarantees each horizon is
/// evaluated at most once and keeps a first-evaluation-order log.
class FixedHorizonEvaluator {
 public:
  virtual ~FixedHorizonEvaluator() = default;

  const HorizonCost& at(int N);
  long probes() const { return probes_; }
  const std::vector<std::pair<int, HorizonCost>>& log() const { return log_; }

 protected:
  virtual HorizonCost evaluate(int N) = 0;

 private:
  std::map<int, HorizonCost> memo_;
  std::vector<std::pair<int, HorizonCost>> log_;
  long probes_ = 0;
};

/// Solves the LP at the given gamma and retains full solutions.
class ContextEvaluator : public FixedHorizonEvaluator {
 public:
  ContextEvaluator(const PlanningContext& ctx, double gamma) : ctx_(ctx), gamma_(gamma) {}

  /// Full solution for a horizon this evaluator has solved; null otherwise.
  const FixedHorizonSolution* solution_at(int N) const;

 protected:
  HorizonCost evaluate(int N) override;

 private:
  const PlanningContext& ctx_;
  double gamma_;
  std::map<int, FixedHorizonSolution> solutions_;
};

// ---------------------------------------------------------------------------
// Local search
// ---------------------------------------------------------------------------

struct RingResult {
  bool feasible = false;
  int N2 = -1;
};

/// Expanding-ring probe around N1 in the index order of F: radii 0, 1, 2, ...
/// with the upper index probed first.  One feasible horizon at the closing
/// radius wins outright; two resolve by smaller cost, then smaller N.
RingResult expanding_ring_feasibility(const FeasibilityAnalysis& fa, int N1,
                                      FixedHorizonEvaluator& eval);

/// Walks F from N2 away from N1 (N2 == N1 compares both neighbors to pick the
/// side, preferring the smaller-N side on ties) and stops at the first strict
/// cost increase or at the end of F, returning the last non-worsening horizon.
int monotone_descent(const FeasibilityAnalysis& fa, int N1, int N2, FixedHorizonEvaluator& eval);

struct PlanDiagnostics {
  int N1 = -1;
  int N2 = -1;
  long lps_solved = 0;
  int F_size = 0;
  std::vector<std::pair<int, HorizonCost>> cost_log;  ///< first-evaluation order
};

struct SearchOutcome {
  bool planned = false;
  int N_hat = -1;
  double J = std::numeric_limits<double>::infinity();
  double fuel = std::numeric_limits<double>::infinity();
  PlanDiagnostics diagnostics;
};

/// Initial guess + feasibility ring + monotone descent over an arbitrary
/// evaluator.  Infeasible when F is empty or every member's LP is infeasible.
SearchOutcome search_horizon(const FeasibilityAnalysis& fa, double gamma,
                             FixedHorizonEvaluator& eval);

// ---------------------------------------------------------------------------
// Planning entry points and baselines
// ---------------------------------------------------------------------------

struct PlanResult {
  enum class Status { Planned, Infeasible };
  Status status = Status::Infeasible;
  int N_hat = -1;
  FixedHorizonSolution solution;
  PlanDiagnostics diagnostics;
};

PlanResult plan(const PlanningContext& ctx, double gamma);
PlanResult plan(const ScenarioConfig& config);

struct EnumerationProfile {
  struct Entry {
    int N = 0;
    bool feasible = false;
    double J = std::numeric_limits<double>::infinity();
    double fuel = std::numeric_limits<double>::infinity();
  };
  std::vector<Entry> entries;  ///< one per N = 1..N_ub, ascending
  int N_star = -1;             ///< -1 when nothing is feasible
  double J_star = std::numeric_limits<double>::infinity();
  double fuel_star = std::numeric_limits<double>::infinity();
};

/// Solves every horizon in [1, N_ub]; the global optimum ties to smaller N.
/// workers > 1 fans the independent solves out to a thread pool; results are
/// identical to the sequential order.
EnumerationProfile enumerate_all(const PlanningContext& ctx, double gamma, int workers = 1);

/// Evaluator backed by a precomputed enumeration profile: J(N; gamma) =
/// N + gamma * fuel(N).  For gamma > 0 the per-horizon minimum fuel does not
/// depend on gamma, so one profile serves a whole gamma grid.
class ProfileEvaluator : public FixedHorizonEvaluator {
 public:
  ProfileEvaluator(const EnumerationProfile& profile, double gamma)
      : profile_(profile), gamma_(gamma) {}

 protected:
  HorizonCost evaluate(int N) override;

 private:
  const EnumerationProfile& profile_;
  double gamma_;
};

struct BaselineResult {
  bool planned = false;
  int N_bs = -1;
  double J = std::numeric_limits<double>::infinity();
  double fuel = std::numeric_limits<double>::infinity();
  long probes = 0;  ///< distinct horizons evaluated by this call
};

/// Integer ternary search on [1, N_ub] treating infeasible horizons as +inf
/// cost.  Logarithmic probe count; in general returns only a local minimum.
BaselineResult binary_search_baseline(int N_ub, FixedHorizonEvaluator& eval);

}  // namespace rvd
