#include "rvd/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace rvd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Horizon pruning
// ---------------------------------------------------------------------------

bool FeasibilityAnalysis::contains(int N) const {
  return std::binary_search(F.begin(), F.end(), N);
}

int FeasibilityAnalysis::index_of(int N) const {
  const auto it = std::lower_bound(F.begin(), F.end(), N);
  if (it == F.end() || *it != N) return -1;
  return static_cast<int>(it - F.begin());
}

FeasibilityAnalysis feasible_set(const ReachabilityTable& table, const NormalizedState& x0,
                                 const ReferenceTrajectory& reference, int k0, int N_ub,
                                 double tol) {
  FeasibilityAnalysis fa;
  fa.N_ub = N_ub;
  for (int N = 1; N <= N_ub; ++N) {
    const Vec6 gap = reference.at(k0 + N).x - table.power(N) * x0.x;
    Eigen::VectorXd e = table.pinv_at(N) * gap;
    const double residual = (table.reach_at(N) * e - gap).lpNorm<Eigen::Infinity>();
    if (residual > tol) continue;
    const double l2 = e.norm();
    if (l2 > std::sqrt(3.0 * N)) continue;
    fa.F.push_back(N);
    fa.e_l1.push_back(e.lpNorm<1>());
    fa.e_l2.push_back(l2);
    fa.e.push_back(std::move(e));
  }
  return fa;
}

FeasibilityAnalysis feasible_set(const PlanningContext& ctx) {
  return feasible_set(ctx.table, ctx.x0, ctx.reference, ctx.k0, ctx.N_ub, ctx.tol.membership);
}

int initial_guess(const FeasibilityAnalysis& fa, double gamma) {
  if (fa.F.empty()) throw SolverFault("initial guess requires a nonempty candidate set");
  int best = fa.F[0];
  double best_cost = static_cast<double>(fa.F[0]) + gamma * fa.e_l1[0];
  for (size_t q = 1; q < fa.F.size(); ++q) {
    const double cost = static_cast<double>(fa.F[q]) + gamma * fa.e_l1[q];
    if (cost < best_cost) {
      best_cost = cost;
      best = fa.F[q];
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Evaluators
// ---------------------------------------------------------------------------

const HorizonCost& FixedHorizonEvaluator::at(int N) {
  const auto it = memo_.find(N);
  if (it != memo_.end()) return it->second;
  const HorizonCost cost = evaluate(N);
  ++probes_;
  log_.emplace_back(N, cost);
  return memo_.emplace(N, cost).first->second;
}

const FixedHorizonSolution* ContextEvaluator::solution_at(int N) const {
  const auto it = solutions_.find(N);
  return it == solutions_.end() ? nullptr : &it->second;
}

HorizonCost ContextEvaluator::evaluate(int N) {
  FixedHorizonSolution sol = solve_fixed_horizon(ctx_, N, gamma_);
  HorizonCost cost;
  if (sol.feasible()) {
    cost.feasible = true;
    cost.J = sol.J;
    cost.fuel = sol.fuel;
    solutions_.emplace(N, std::move(sol));
  }
  return cost;
}

HorizonCost ProfileEvaluator::evaluate(int N) {
  if (N < 1 || N > static_cast<int>(profile_.entries.size())) {
    throw SolverFault("profile does not cover horizon " + std::to_string(N));
  }
  const EnumerationProfile::Entry& entry = profile_.entries[static_cast<size_t>(N - 1)];
  HorizonCost cost;
  if (entry.feasible) {
    cost.feasible = true;
    cost.fuel = entry.fuel;
    cost.J = static_cast<double>(N) + gamma_ * entry.fuel;
  }
  return cost;
}

// ---------------------------------------------------------------------------
// Local search
// ---------------------------------------------------------------------------

RingResult expanding_ring_feasibility(const FeasibilityAnalysis& fa, int N1,
                                      FixedHorizonEvaluator& eval) {
  const int q1 = fa.index_of(N1);
  if (q1 < 0) throw SolverFault("ring start must belong to the candidate set");
  const int last = static_cast<int>(fa.F.size()) - 1;
  for (int i = 0;; ++i) {
    const int up = q1 + i;
    const int dn = q1 - i;
    const bool up_ok = up <= last;
    const bool dn_ok = dn >= 0;
    if (!up_ok && !dn_ok) return {};
    const HorizonCost* cu = up_ok ? &eval.at(fa.F[static_cast<size_t>(up)]) : nullptr;
    const HorizonCost* cd =
        (dn_ok && i > 0) ? &eval.at(fa.F[static_cast<size_t>(dn)]) : nullptr;
    const bool fu = cu != nullptr && cu->feasible;
    const bool fd = cd != nullptr && cd->feasible;
    if (fu && fd) {
      // Equal costs resolve to the smaller horizon.
      if (cu->J < cd->J) return {true, fa.F[static_cast<size_t>(up)]};
      return {true, fa.F[static_cast<size_t>(dn)]};
    }
    if (fu) return {true, fa.F[static_cast<size_t>(up)]};
    if (fd) return {true, fa.F[static_cast<size_t>(dn)]};
  }
}

namespace {

double cost_or_inf(const HorizonCost& c) { return c.feasible ? c.J : kInf; }

/// Walks F from index q2 in direction dir until the cost strictly increases
/// or the set ends; returns the last horizon whose cost did not worsen.
int descend_from(const FeasibilityAnalysis& fa, int q2, int dir, FixedHorizonEvaluator& eval) {
  const int last = static_cast<int>(fa.F.size()) - 1;
  int prev = q2;
  double prev_cost = cost_or_inf(eval.at(fa.F[static_cast<size_t>(q2)]));
  for (int i = 1;; ++i) {
    const int idx = q2 + dir * i;
    if (idx < 0 || idx > last) return fa.F[static_cast<size_t>(prev)];
    const double cost = cost_or_inf(eval.at(fa.F[static_cast<size_t>(idx)]));
    if (cost > prev_cost) return fa.F[static_cast<size_t>(prev)];
    prev = idx;
    prev_cost = cost;
  }
}

}  // namespace

int monotone_descent(const FeasibilityAnalysis& fa, int N1, int N2, FixedHorizonEvaluator& eval) {
  const int q1 = fa.index_of(N1);
  const int q2 = fa.index_of(N2);
  if (q1 < 0 || q2 < 0) throw SolverFault("descent endpoints must belong to the candidate set");
  if (N2 > N1) return descend_from(fa, q2, +1, eval);
  if (N2 < N1) return descend_from(fa, q2, -1, eval);

  // The start is feasible: pick the walk direction from its two neighbors,
  // preferring the smaller-horizon side on ties.
  const int last = static_cast<int>(fa.F.size()) - 1;
  const double j0 = cost_or_inf(eval.at(fa.F[static_cast<size_t>(q1)]));
  const double jm = q1 > 0 ? cost_or_inf(eval.at(fa.F[static_cast<size_t>(q1 - 1)])) : kInf;
  const double jp = q1 < last ? cost_or_inf(eval.at(fa.F[static_cast<size_t>(q1 + 1)])) : kInf;
  const double j_low = std::min({jm, j0, jp});
  if (j_low == jm) return descend_from(fa, q1, -1, eval);
  if (j_low == jp) return descend_from(fa, q1, +1, eval);
  return N1;
}

SearchOutcome search_horizon(const FeasibilityAnalysis& fa, double gamma,
                             FixedHorizonEvaluator& eval) {
  SearchOutcome out;
  out.diagnostics.F_size = static_cast<int>(fa.F.size());
  if (fa.F.empty()) return out;

  const long probes_before = eval.probes();
  const int N1 = initial_guess(fa, gamma);
  out.diagnostics.N1 = N1;

  const RingResult ring = expanding_ring_feasibility(fa, N1, eval);
  if (ring.feasible) {
    out.diagnostics.N2 = ring.N2;
    const int N_hat = monotone_descent(fa, N1, ring.N2, eval);
    const HorizonCost& best = eval.at(N_hat);
    out.planned = true;
    out.N_hat = N_hat;
    out.J = best.J;
    out.fuel = best.fuel;
  }
  out.diagnostics.lps_solved = eval.probes() - probes_before;
  out.diagnostics.cost_log = eval.log();
  return out;
}

// ---------------------------------------------------------------------------
// Entry points and baselines
// ---------------------------------------------------------------------------

PlanResult plan(const PlanningContext& ctx, double gamma) {
  PlanResult result;
  const FeasibilityAnalysis fa = feasible_set(ctx);
  ContextEvaluator eval(ctx, gamma);
  SearchOutcome out = search_horizon(fa, gamma, eval);
  result.diagnostics = std::move(out.diagnostics);
  if (!out.planned) return result;

  const FixedHorizonSolution* sol = eval.solution_at(out.N_hat);
  if (sol == nullptr) throw SolverFault("planned horizon lacks a stored solution");
  result.status = PlanResult::Status::Planned;
  result.N_hat = out.N_hat;
  result.solution = *sol;
  return result;
}

PlanResult plan(const ScenarioConfig& config) {
  const PlanningContext ctx = make_context(config);
  return plan(ctx, config.gamma);
}

EnumerationProfile enumerate_all(const PlanningContext& ctx, double gamma, int workers) {
  EnumerationProfile profile;
  profile.entries.resize(static_cast<size_t>(ctx.N_ub));
  for (int N = 1; N <= ctx.N_ub; ++N) profile.entries[static_cast<size_t>(N - 1)].N = N;

  std::atomic<int> next{1};
  std::exception_ptr error;
  std::mutex error_mu;
  const auto body = [&]() {
    for (;;) {
      const int N = next.fetch_add(1);
      if (N > ctx.N_ub) return;
      try {
        const FixedHorizonSolution sol = solve_fixed_horizon(ctx, N, gamma);
        if (sol.feasible()) {
          auto& entry = profile.entries[static_cast<size_t>(N - 1)];
          entry.feasible = true;
          entry.J = sol.J;
          entry.fuel = sol.fuel;
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  const int n_workers = std::max(1, std::min(workers, ctx.N_ub));
  if (n_workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (const auto& entry : profile.entries) {
    if (entry.feasible && entry.J < profile.J_star) {
      profile.J_star = entry.J;
      profile.N_star = entry.N;
      profile.fuel_star = entry.fuel;
    }
  }
  return profile;
}

BaselineResult binary_search_baseline(int N_ub, FixedHorizonEvaluator& eval) {
  BaselineResult out;
  if (N_ub < 1) return out;

  std::set<int> probed;
  const auto cost = [&](int N) {
    probed.insert(N);
    return cost_or_inf(eval.at(N));
  };

  int lo = 1;
  int hi = N_ub;
  while (hi - lo + 1 > 3) {
    const int m1 = lo + (hi - lo) / 3;
    const int m2 = hi - (hi - lo) / 3;
    if (cost(m1) <= cost(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }

  int best_N = -1;
  double best_J = kInf;
  for (int N = lo; N <= hi; ++N) {
    const double c = cost(N);
    if (c < best_J) {
      best_J = c;
      best_N = N;
    }
  }
  out.probes = static_cast<long>(probed.size());
  if (best_N < 0 || !std::isfinite(best_J)) return out;
  out.planned = true;
  out.N_bs = best_N;
  out.J = best_J;
  out.fuel = eval.at(best_N).fuel;
  return out;
}

}  // namespace rvd
