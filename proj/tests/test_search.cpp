// Variable-horizon search checks: candidate-set pruning, the expanding
// feasibility ring, monotone descent (including tie handling), the composed
// planner, full enumeration, and the logarithmic baseline.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rvd/scenario.hpp"
#include "rvd/search.hpp"

namespace {

// Evaluator driven by a cost table: entries absent from the table (or mapped
// to +inf) report as infeasible horizons.
class ScriptedEvaluator : public rvd::FixedHorizonEvaluator {
 public:
  explicit ScriptedEvaluator(std::map<int, double> costs) : costs_(std::move(costs)) {}

 protected:
  rvd::HorizonCost evaluate(int N) override {
    rvd::HorizonCost c;
    const auto it = costs_.find(N);
    if (it != costs_.end() && std::isfinite(it->second)) {
      c.feasible = true;
      c.J = it->second;
      c.fuel = 0.0;
    }
    return c;
  }

 private:
  std::map<int, double> costs_;
};

rvd::FeasibilityAnalysis make_fa(std::vector<int> F, std::vector<double> e_l1 = {}) {
  rvd::FeasibilityAnalysis fa;
  fa.N_ub = F.empty() ? 0 : F.back();
  fa.F = std::move(F);
  fa.e_l1 = e_l1.empty() ? std::vector<double>(fa.F.size(), 0.0) : std::move(e_l1);
  fa.e_l2.assign(fa.F.size(), 0.0);
  fa.e.assign(fa.F.size(), Eigen::VectorXd());
  return fa;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::vector<int> probe_order(const rvd::FixedHorizonEvaluator& eval) {
  std::vector<int> out;
  for (const auto& [N, cost] : eval.log()) out.push_back(N);
  return out;
}

rvd::ScenarioConfig table1_config(int n_ub) {
  rvd::ScenarioConfig cfg = rvd::load_scenario(std::string(RVD_SCENARIO_DIR) + "/table1.json");
  cfg.N_ub = n_ub;
  rvd::validate_scenario(cfg);
  return cfg;
}

const rvd::PlanningContext& table1_context() {
  static const rvd::PlanningContext ctx = rvd::make_context(table1_config(45));
  return ctx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Candidate set
// ---------------------------------------------------------------------------

TEST_CASE("candidate-set membership helpers") {
  const rvd::FeasibilityAnalysis fa = make_fa({3, 5, 9});
  CHECK(fa.contains(5));
  CHECK(!fa.contains(4));
  CHECK(fa.index_of(3) == 0);
  CHECK(fa.index_of(9) == 2);
  CHECK(fa.index_of(1) == -1);
  CHECK(fa.index_of(10) == -1);
}

TEST_CASE("initial guess minimizes the proxy cost, ties to the smaller horizon") {
  CHECK(rvd::initial_guess(make_fa({10, 11, 12}, {5.0, 2.0, 0.1}), 1.0) == 12);
  CHECK(rvd::initial_guess(make_fa({10, 11, 12}, {5.0, 2.0, 0.1}), 0.0) == 10);
  CHECK(rvd::initial_guess(make_fa({10, 11, 12}, {2.0, 1.0, 0.0}), 1.0) == 10);  // all cost 12
  CHECK_THROWS_AS(rvd::initial_guess(make_fa({}), 1.0), rvd::SolverFault);
}

TEST_CASE("pruning keeps exactly the reachable low-energy horizons") {
  const rvd::PlanningContext& ctx = table1_context();
  const rvd::FeasibilityAnalysis fa = rvd::feasible_set(ctx);

  REQUIRE(!fa.F.empty());
  CHECK(fa.N_ub == 45);
  CHECK(fa.e.size() == fa.F.size());
  CHECK(fa.e_l1.size() == fa.F.size());
  CHECK(fa.e_l2.size() == fa.F.size());
  for (size_t q = 1; q < fa.F.size(); ++q) CHECK(fa.F[q] > fa.F[q - 1]);
  CHECK(fa.contains(26));
  CHECK(fa.F.front() <= 26);

  // Recheck every member against the defining inequalities.
  for (size_t q = 0; q < fa.F.size(); ++q) {
    const int N = fa.F[q];
    const rvd::Vec6 gap = ctx.reference.at(ctx.k0 + N).x - ctx.table.power(N) * ctx.x0.x;
    const double residual = (ctx.table.reach_at(N) * fa.e[q] - gap).lpNorm<Eigen::Infinity>();
    CHECK(residual <= 1e-7);
    CHECK(fa.e_l2[q] <= std::sqrt(3.0 * N) + 1e-12);
    CHECK(fa.e_l1[q] == doctest::Approx(fa.e[q].lpNorm<1>()).epsilon(1e-14));
  }

  // Non-members must fail one of the two inequalities.
  for (int N = 1; N <= fa.N_ub; ++N) {
    if (fa.contains(N)) continue;
    const rvd::Vec6 gap = ctx.reference.at(ctx.k0 + N).x - ctx.table.power(N) * ctx.x0.x;
    const Eigen::VectorXd e = ctx.table.pinv_at(N) * gap;
    const double residual = (ctx.table.reach_at(N) * e - gap).lpNorm<Eigen::Infinity>();
    CHECK((residual > 1e-7 || e.norm() > std::sqrt(3.0 * N)));
  }
}

TEST_CASE("a free-drift reference is reachable at every horizon with zero energy") {
  const rvd::PlanningContext& ctx = table1_context();
  rvd::ReferenceTrajectory drift;
  drift.scales = ctx.reference.scales;
  drift.samples.resize(static_cast<size_t>(ctx.N_ub) + 1);
  for (int i = 0; i <= ctx.N_ub; ++i) {
    drift.samples[static_cast<size_t>(i)].x = ctx.table.power(i) * ctx.x0.x;
  }
  const rvd::FeasibilityAnalysis fa =
      rvd::feasible_set(ctx.table, ctx.x0, drift, ctx.k0, ctx.N_ub, 1e-7);
  REQUIRE(static_cast<int>(fa.F.size()) == ctx.N_ub);
  for (size_t q = 0; q < fa.F.size(); ++q) CHECK(fa.e_l2[q] < 1e-9);
}

// ---------------------------------------------------------------------------
// Expanding ring
// ---------------------------------------------------------------------------

TEST_CASE("ring stops immediately when the guess itself is feasible") {
  const auto fa = make_fa(range(4, 12));
  ScriptedEvaluator eval({{8, 5.0}});
  const rvd::RingResult ring = rvd::expanding_ring_feasibility(fa, 8, eval);
  CHECK(ring.feasible);
  CHECK(ring.N2 == 8);
  CHECK(eval.probes() == 1);
}

TEST_CASE("ring expands alternately upward then downward") {
  const auto fa = make_fa(range(1, 10));
  ScriptedEvaluator eval({{8, 3.0}});
  const rvd::RingResult ring = rvd::expanding_ring_feasibility(fa, 5, eval);
  CHECK(ring.feasible);
  CHECK(ring.N2 == 8);
  CHECK(probe_order(eval) == std::vector<int>{5, 6, 4, 7, 3, 8, 2});
}

TEST_CASE("two feasible horizons at one radius resolve by cost, then smaller N") {
  const auto fa = make_fa(range(1, 10));
  SUBCASE("lower side cheaper") {
    ScriptedEvaluator eval({{6, 10.0}, {4, 9.0}});
    CHECK(rvd::expanding_ring_feasibility(fa, 5, eval).N2 == 4);
  }
  SUBCASE("upper side cheaper") {
    ScriptedEvaluator eval({{6, 9.0}, {4, 10.0}});
    CHECK(rvd::expanding_ring_feasibility(fa, 5, eval).N2 == 6);
  }
  SUBCASE("exact tie goes to the smaller horizon") {
    ScriptedEvaluator eval({{6, 7.0}, {4, 7.0}});
    CHECK(rvd::expanding_ring_feasibility(fa, 5, eval).N2 == 4);
  }
}

TEST_CASE("ring keeps expanding on one side after the other is exhausted") {
  const auto fa = make_fa(range(1, 10));
  ScriptedEvaluator eval({{9, 2.0}});
  const rvd::RingResult ring = rvd::expanding_ring_feasibility(fa, 2, eval);
  CHECK(ring.feasible);
  CHECK(ring.N2 == 9);
  CHECK(probe_order(eval) == std::vector<int>{2, 3, 1, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("ring reports failure when every candidate is infeasible") {
  const auto fa = make_fa(range(1, 6));
  ScriptedEvaluator eval({});
  CHECK(!rvd::expanding_ring_feasibility(fa, 3, eval).feasible);
  CHECK(eval.probes() == 6);  // every member probed exactly once
}

TEST_CASE("ring rejects a start outside the candidate set") {
  const auto fa = make_fa({2, 4, 6});
  ScriptedEvaluator eval({});
  CHECK_THROWS_AS(rvd::expanding_ring_feasibility(fa, 3, eval), rvd::SolverFault);
}

// ---------------------------------------------------------------------------
// Monotone descent
// ---------------------------------------------------------------------------

TEST_CASE("descent stops at the first strict cost increase") {
  const auto fa = make_fa(range(1, 12));
  ScriptedEvaluator eval({{6, 10.0}, {7, 11.0}});
  CHECK(rvd::monotone_descent(fa, 3, 6, eval) == 6);
}

TEST_CASE("descent traverses plateaus and returns their far edge") {
  const auto fa = make_fa(range(1, 12));
  ScriptedEvaluator eval({{6, 10.0}, {7, 10.0}, {8, 10.0}, {9, 12.0}});
  CHECK(rvd::monotone_descent(fa, 3, 6, eval) == 8);
}

TEST_CASE("descent runs off the end of the candidate set") {
  const auto fa = make_fa(range(1, 10));
  ScriptedEvaluator eval({{6, 10.0}, {7, 9.0}, {8, 8.0}, {9, 7.0}, {10, 6.0}});
  CHECK(rvd::monotone_descent(fa, 3, 6, eval) == 10);
}

TEST_CASE("descent walks downward when the ring landed below the guess") {
  const auto fa = make_fa(range(1, 12));
  ScriptedEvaluator eval({{6, 10.0}, {5, 9.0}, {4, 11.0}});
  CHECK(rvd::monotone_descent(fa, 9, 6, eval) == 5);
}

TEST_CASE("feasible guess picks a direction from its neighbors") {
  const auto fa = make_fa(range(1, 12));
  SUBCASE("both neighbors worse keeps the guess") {
    ScriptedEvaluator eval({{5, 11.0}, {6, 10.0}, {7, 12.0}});
    CHECK(rvd::monotone_descent(fa, 6, 6, eval) == 6);
  }
  SUBCASE("strictly better upper neighbor walks upward") {
    ScriptedEvaluator eval({{5, 10.0}, {6, 10.0}, {7, 9.0}});
    CHECK(rvd::monotone_descent(fa, 6, 6, eval) == 7);
  }
  SUBCASE("tied lower neighbor walks downward") {
    ScriptedEvaluator eval({{5, 10.0}, {6, 10.0}, {7, 11.0}});
    CHECK(rvd::monotone_descent(fa, 6, 6, eval) == 5);
  }
  SUBCASE("at the lower end of the set, only the upper side exists") {
    const auto fa2 = make_fa(range(6, 12));
    ScriptedEvaluator best_here({{6, 8.0}, {7, 9.0}});
    CHECK(rvd::monotone_descent(fa2, 6, 6, best_here) == 6);
    ScriptedEvaluator better_up({{6, 8.0}, {7, 7.0}, {8, 7.5}});
    CHECK(rvd::monotone_descent(fa2, 6, 6, better_up) == 7);
  }
}

TEST_CASE("descent rejects endpoints outside the candidate set") {
  const auto fa = make_fa({2, 4, 6});
  ScriptedEvaluator eval({});
  CHECK_THROWS_AS(rvd::monotone_descent(fa, 3, 4, eval), rvd::SolverFault);
  CHECK_THROWS_AS(rvd::monotone_descent(fa, 4, 5, eval), rvd::SolverFault);
}

// ---------------------------------------------------------------------------
// Composed search
// ---------------------------------------------------------------------------

TEST_CASE("search composes guess, ring, and descent with a probe budget") {
  // Proxy costs make N1 = 14; its LP is infeasible, ring resolves to 13, and
  // the descent walks the plateau down to 11.
  std::vector<double> proxy(11, 10.0);
  proxy[4] = 0.0;  // member 14
  const auto fa = make_fa(range(10, 20), proxy);
  ScriptedEvaluator eval({{15, 20.0}, {13, 19.0}, {12, 18.0}, {11, 18.0}, {10, 19.0}});

  const rvd::SearchOutcome out = rvd::search_horizon(fa, 1.0, eval);
  REQUIRE(out.planned);
  CHECK(out.N_hat == 11);
  CHECK(out.J == 18.0);
  CHECK(out.diagnostics.N1 == 14);
  CHECK(out.diagnostics.N2 == 13);
  CHECK(out.diagnostics.F_size == 11);
  CHECK(out.diagnostics.lps_solved == eval.probes());
  CHECK(probe_order(eval) == std::vector<int>{14, 15, 13, 12, 11, 10});
  CHECK(out.diagnostics.lps_solved <= out.diagnostics.F_size);
}

TEST_CASE("search on an empty or fully infeasible candidate set is not planned") {
  ScriptedEvaluator eval({});
  const rvd::SearchOutcome empty = rvd::search_horizon(make_fa({}), 1.0, eval);
  CHECK(!empty.planned);
  CHECK(empty.diagnostics.F_size == 0);

  ScriptedEvaluator eval2({});
  const rvd::SearchOutcome dead = rvd::search_horizon(make_fa(range(3, 7)), 1.0, eval2);
  CHECK(!dead.planned);
  CHECK(dead.diagnostics.N1 > 0);
}

// ---------------------------------------------------------------------------
// End-to-end on the bundled test scenario (truncated horizon bound)
// ---------------------------------------------------------------------------

TEST_CASE("planner result is conserved through the stored solution") {
  const rvd::PlanningContext& ctx = table1_context();
  const rvd::PlanResult result = rvd::plan(ctx, 4.0);
  REQUIRE(result.status == rvd::PlanResult::Status::Planned);
  REQUIRE(result.N_hat >= 1);
  CHECK(result.solution.N == result.N_hat);
  CHECK(result.diagnostics.lps_solved <= result.diagnostics.F_size);

  // Resolving the same horizon reproduces the stored solution bit for bit.
  const rvd::FixedHorizonSolution direct = rvd::solve_fixed_horizon(ctx, result.N_hat, 4.0);
  REQUIRE(direct.feasible());
  CHECK(direct.J == result.solution.J);
  CHECK(direct.fuel == result.solution.fuel);
  REQUIRE(direct.u.horizon() == result.solution.u.horizon());
  for (int j = 0; j < direct.u.horizon(); ++j) {
    CHECK((direct.u.u[static_cast<size_t>(j)].array() ==
           result.solution.u.u[static_cast<size_t>(j)].array())
              .all());
  }
}

TEST_CASE("enumeration agrees with the planner and exposes the global optimum") {
  const rvd::PlanningContext& ctx = table1_context();
  const rvd::EnumerationProfile profile = rvd::enumerate_all(ctx, 4.0, 1);
  REQUIRE(static_cast<int>(profile.entries.size()) == ctx.N_ub);

  int n_star = -1;
  double j_star = std::numeric_limits<double>::infinity();
  for (const auto& entry : profile.entries) {
    CHECK(entry.N >= 1);
    if (!entry.feasible) continue;
    CHECK(entry.J == doctest::Approx(entry.N + 4.0 * entry.fuel).epsilon(1e-14));
    if (entry.J < j_star) {
      j_star = entry.J;
      n_star = entry.N;
    }
  }
  REQUIRE(n_star > 0);
  CHECK(profile.N_star == n_star);
  CHECK(profile.J_star == j_star);

  const rvd::PlanResult result = rvd::plan(ctx, 4.0);
  REQUIRE(result.status == rvd::PlanResult::Status::Planned);
  CHECK(result.solution.J >= profile.J_star - 1e-12);
  // Local optimality against the in-set neighbors.
  const rvd::FeasibilityAnalysis fa = rvd::feasible_set(ctx);
  const int q = fa.index_of(result.N_hat);
  REQUIRE(q >= 0);
  for (int dq : {-1, +1}) {
    const int qq = q + dq;
    if (qq < 0 || qq >= static_cast<int>(fa.F.size())) continue;
    const auto& neighbor = profile.entries[static_cast<size_t>(fa.F[static_cast<size_t>(qq)] - 1)];
    if (neighbor.feasible) CHECK(neighbor.J >= result.solution.J - 1e-9);
  }
}

TEST_CASE("zero time-weight plans the shortest feasible horizon") {
  const rvd::PlanningContext& ctx = table1_context();
  const rvd::PlanResult result = rvd::plan(ctx, 0.0);
  REQUIRE(result.status == rvd::PlanResult::Status::Planned);

  const rvd::EnumerationProfile profile = rvd::enumerate_all(ctx, 0.0, 1);
  REQUIRE(profile.N_star > 0);
  CHECK(result.N_hat == profile.N_star);
  CHECK(result.solution.J == static_cast<double>(result.N_hat));
  for (const auto& entry : profile.entries) {
    if (entry.feasible) {
      CHECK(entry.N >= result.N_hat);  // nothing shorter is feasible
      break;
    }
  }
}

TEST_CASE("worker count does not change the enumeration") {
  const rvd::PlanningContext& ctx = table1_context();
  const rvd::EnumerationProfile seq = rvd::enumerate_all(ctx, 4.0, 1);
  const rvd::EnumerationProfile par = rvd::enumerate_all(ctx, 4.0, 3);
  REQUIRE(seq.entries.size() == par.entries.size());
  for (size_t i = 0; i < seq.entries.size(); ++i) {
    CHECK(seq.entries[i].feasible == par.entries[i].feasible);
    CHECK(seq.entries[i].J == par.entries[i].J);
    CHECK(seq.entries[i].fuel == par.entries[i].fuel);
  }
  CHECK(seq.N_star == par.N_star);
}

// ---------------------------------------------------------------------------
// Profile-backed evaluator
// ---------------------------------------------------------------------------

TEST_CASE("profile evaluator reproduces fresh solves at any positive time-weight") {
  const rvd::PlanningContext& ctx = table1_context();
  const rvd::EnumerationProfile profile = rvd::enumerate_all(ctx, 1.0, 1);

  rvd::ProfileEvaluator from_profile(profile, 4.0);
  rvd::ContextEvaluator fresh(ctx, 4.0);
  for (int N : {26, 30, 38, 45}) {
    const rvd::HorizonCost& a = from_profile.at(N);
    const rvd::HorizonCost& b = fresh.at(N);
    REQUIRE(a.feasible == b.feasible);
    if (a.feasible) {
      CHECK(std::abs(a.J - b.J) <= 1e-9 * std::max(1.0, std::abs(b.J)));
      CHECK(std::abs(a.fuel - b.fuel) <= 1e-9);
    }
  }

  // The composed search takes the same path on either evaluator.
  const rvd::FeasibilityAnalysis fa = rvd::feasible_set(ctx);
  rvd::ProfileEvaluator pe(profile, 4.0);
  rvd::ContextEvaluator ce(ctx, 4.0);
  const rvd::SearchOutcome a = rvd::search_horizon(fa, 4.0, pe);
  const rvd::SearchOutcome b = rvd::search_horizon(fa, 4.0, ce);
  REQUIRE(a.planned == b.planned);
  CHECK(a.N_hat == b.N_hat);
  CHECK(probe_order(pe) == probe_order(ce));

  rvd::ProfileEvaluator out_of_range(profile, 4.0);
  CHECK_THROWS_AS(out_of_range.at(ctx.N_ub + 1), rvd::SolverFault);
}

// ---------------------------------------------------------------------------
// Logarithmic baseline
// ---------------------------------------------------------------------------

TEST_CASE("baseline finds the minimum of a unimodal profile within its budget") {
  std::map<int, double> costs;
  for (int N = 1; N <= 128; ++N) costs[N] = std::abs(N - 37) + 5.0;
  ScriptedEvaluator eval(costs);
  const rvd::BaselineResult out = rvd::binary_search_baseline(128, eval);
  REQUIRE(out.planned);
  CHECK(out.N_bs == 37);
  CHECK(out.J == 5.0);
  const long budget = 2 * static_cast<long>(std::ceil(std::log(128.0) / std::log(1.5))) + 3;
  CHECK(out.probes <= budget);
  CHECK(out.probes == eval.probes());  // memoized: every probe is distinct
}

TEST_CASE("baseline on a bimodal profile lands in one of the two valleys") {
  std::map<int, double> costs;
  for (int N = 1; N <= 128; ++N) {
    costs[N] = std::min(std::abs(N - 10) + 4.0, std::abs(N - 100) + 6.0);
  }
  ScriptedEvaluator eval(costs);
  const rvd::BaselineResult out = rvd::binary_search_baseline(128, eval);
  REQUIRE(out.planned);
  CHECK((out.N_bs == 10 || out.N_bs == 100));
  CHECK(out.J == costs[out.N_bs]);
}

TEST_CASE("baseline edge cases") {
  ScriptedEvaluator none({});
  CHECK(!rvd::binary_search_baseline(32, none).planned);

  ScriptedEvaluator single({{1, 3.0}});
  const rvd::BaselineResult one = rvd::binary_search_baseline(1, single);
  REQUIRE(one.planned);
  CHECK(one.N_bs == 1);
  CHECK(one.probes == 1);

  ScriptedEvaluator unused({});
  CHECK(!rvd::binary_search_baseline(0, unused).planned);
}
