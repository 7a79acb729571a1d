#include "rvd/commands.hpp"

#include "rvd/search.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace rvd {

namespace {

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_artifact(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot open output file: " + path.string());
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

ScenarioConfig load_with_overrides(const CommandOptions& opts) {
  ScenarioConfig cfg = load_scenario(opts.config_path);
  if (opts.gamma.has_value()) cfg.gamma = *opts.gamma;
  if (opts.n_ub.has_value()) cfg.N_ub = *opts.n_ub;
  validate_scenario(cfg);
  return cfg;
}

int effective_workers(const CommandOptions& opts) {
  if (opts.workers > 0) return opts.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

void write_plan_csv(std::ofstream out, const ScenarioConfig& cfg, const PlanResult& result) {
  const ScenarioScales scales = cfg.scales();
  const int N = result.N_hat;
  const int lambda_N = N - cfg.N_d;
  out << "k,t_s,pR_m,pT_m,pN_m,vR_mps,vT_mps,vN_mps,aR_mps2,aT_mps2,aN_mps2,phase\n";
  for (int k = cfg.k0; k <= cfg.k0 + N; ++k) {
    const int i = k - cfg.k0;
    const PhysicalRelativeState s =
        denormalize(result.solution.states[static_cast<size_t>(i)], scales);
    const Vec3 a =
        i < N ? Vec3(result.solution.u.u[static_cast<size_t>(i)] * cfg.a_max) : Vec3(Vec3::Zero());
    const char* phase = i < lambda_N ? "rendezvous" : "docking";
    out << k << ',' << fmt(scales.time_at(k));
    for (int j = 0; j < 3; ++j) out << ',' << fmt(s.p(j));
    for (int j = 0; j < 3; ++j) out << ',' << fmt(s.v(j));
    for (int j = 0; j < 3; ++j) out << ',' << fmt(a(j));
    out << ',' << phase << '\n';
  }
}

void write_profile_csv(std::ofstream out, const EnumerationProfile& profile) {
  out << "N,feasible,J,fuel\n";
  for (const auto& entry : profile.entries) {
    out << entry.N << ',' << (entry.feasible ? 1 : 0) << ',' << fmt(entry.J) << ','
        << fmt(entry.fuel) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

}  // namespace

GammaGrid GammaGrid::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  for (const char ch : text) {
    if (ch == ':') {
      parts.push_back(token);
      token.clear();
    } else {
      token.push_back(ch);
    }
  }
  parts.push_back(token);

  const auto to_double = [&](const std::string& s) {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ScenarioError("bad gamma grid component '" + s + "' in '" + text + "'");
    }
  };

  GammaGrid grid;
  if (parts.size() == 1) {
    grid.start = grid.stop = to_double(parts[0]);
    grid.step = 1.0;
  } else if (parts.size() == 3) {
    grid.start = to_double(parts[0]);
    grid.stop = to_double(parts[1]);
    grid.step = to_double(parts[2]);
  } else {
    throw ScenarioError("gamma grid must be 'value' or 'start:stop:step', got '" + text + "'");
  }
  if (grid.step <= 0.0) throw ScenarioError("gamma grid step must be positive");
  if (grid.stop < grid.start) throw ScenarioError("gamma grid stop must be >= start");
  if (grid.start < 0.0) throw ScenarioError("gamma grid values must be >= 0");
  return grid;
}

std::vector<double> GammaGrid::values() const {
  // Index-based generation keeps endpoints exact despite rounding.
  const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(start + step * i);
  return out;
}

int cmd_plan(const CommandOptions& opts) {
  const ScenarioConfig cfg = load_with_overrides(opts);
  const Stopwatch watch;
  const PlanResult result = plan(cfg);
  const double wall_ms = watch.ms();

  const PlanDiagnostics& d = result.diagnostics;
  std::string summary;
  if (result.status == PlanResult::Status::Planned) {
    write_plan_csv(open_artifact(opts.out_dir, "plan.csv"), cfg, result);
    summary = "status=planned N_hat=" + std::to_string(result.N_hat) +
              " J=" + fmt(result.solution.J) + " fuel=" + fmt(result.solution.fuel) +
              " N1=" + std::to_string(d.N1) + " N2=" + std::to_string(d.N2) +
              " F_size=" + std::to_string(d.F_size) + " lps_solved=" + std::to_string(d.lps_solved);
  } else {
    summary = "status=infeasible F_size=" + std::to_string(d.F_size) +
              " lps_solved=" + std::to_string(d.lps_solved);
  }
  std::cout << summary << " wall_ms=" << fmt(wall_ms) << "\n";
  open_artifact(opts.out_dir, "plan_summary.txt") << summary << " wall_ms=" << fmt(wall_ms) << "\n";
  return result.status == PlanResult::Status::Planned ? 0 : 2;
}

int cmd_sweep(const CommandOptions& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  const PlanningContext ctx = make_context(cfg);
  const Stopwatch watch;
  const EnumerationProfile profile = enumerate_all(ctx, cfg.gamma, effective_workers(opts));
  const double wall_ms = watch.ms();

  write_profile_csv(open_artifact(opts.out_dir, "profile.csv"), profile);
  int feasible_count = 0;
  for (const auto& entry : profile.entries) feasible_count += entry.feasible ? 1 : 0;

  const std::string summary =
      "gamma=" + fmt(cfg.gamma) + " N_star=" + std::to_string(profile.N_star) +
      " J_star=" + fmt(profile.J_star) + " fuel_star=" + fmt(profile.fuel_star) + " feasible=" +
      std::to_string(feasible_count) + "/" + std::to_string(cfg.N_ub);
  std::cout << summary << " wall_ms=" << fmt(wall_ms) << "\n";
  open_artifact(opts.out_dir, "sweep_summary.txt")
      << summary << " wall_ms=" << fmt(wall_ms) << "\n";
  return 0;
}

int cmd_compare(const CommandOptions& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  const std::vector<double> gammas = GammaGrid::parse(opts.gamma_grid).values();
  const PlanningContext ctx = make_context(cfg);
  const FeasibilityAnalysis fa = feasible_set(ctx);

  // One minimum-fuel profile serves every gamma: for gamma > 0 the
  // fixed-horizon LP minimizes fuel regardless of gamma's value, so
  // J(N; gamma) = N + gamma * fuel(N) is derivable without new solves.
  const Stopwatch profile_watch;
  const EnumerationProfile profile = enumerate_all(ctx, 1.0, effective_workers(opts));
  const double profile_ms = profile_watch.ms();

  std::ofstream csv = open_artifact(opts.out_dir, "compare.csv");
  csv << "gamma,N_star,N_hat,N_bs,J_star,J_hat,J_bs,fuel_star,fuel_hat,fuel_bs,"
         "wall_ms_enum,wall_ms_plan,wall_ms_bs,probes_plan,probes_bs\n";

  std::ofstream summary = open_artifact(opts.out_dir, "compare_summary.txt");
  const std::string header = "profile_wall_ms=" + fmt(profile_ms) +
                             " (minimum-fuel sweep shared by all gamma rows) F_size=" +
                             std::to_string(fa.F.size());
  std::cout << header << "\n";
  summary << header << "\n";

  for (const double gamma : gammas) {
    // Global optimum by direct scan of the shared profile.
    const Stopwatch enum_watch;
    int N_star = -1;
    double J_star = std::numeric_limits<double>::infinity();
    double fuel_star = std::numeric_limits<double>::infinity();
    for (const auto& entry : profile.entries) {
      if (!entry.feasible) continue;
      const double J = static_cast<double>(entry.N) + gamma * entry.fuel;
      if (J < J_star) {
        J_star = J;
        N_star = entry.N;
        fuel_star = entry.fuel;
      }
    }
    const double enum_ms = enum_watch.ms();

    const Stopwatch plan_watch;
    ProfileEvaluator plan_eval(profile, gamma);
    const SearchOutcome outcome = search_horizon(fa, gamma, plan_eval);
    const double plan_ms = plan_watch.ms();

    const Stopwatch bs_watch;
    ProfileEvaluator bs_eval(profile, gamma);
    const BaselineResult baseline = binary_search_baseline(cfg.N_ub, bs_eval);
    const double bs_ms = bs_watch.ms();

    csv << fmt(gamma) << ',' << N_star << ',' << outcome.N_hat << ',' << baseline.N_bs << ','
        << fmt(J_star) << ',' << fmt(outcome.J) << ',' << fmt(baseline.J) << ',' << fmt(fuel_star)
        << ',' << fmt(outcome.fuel) << ',' << fmt(baseline.fuel) << ',' << fmt(enum_ms) << ','
        << fmt(plan_ms) << ',' << fmt(bs_ms) << ',' << outcome.diagnostics.lps_solved << ','
        << baseline.probes << '\n';

    const std::string line = "gamma=" + fmt(gamma) + " N_star=" + std::to_string(N_star) +
                             " N_hat=" + std::to_string(outcome.N_hat) +
                             " N_bs=" + std::to_string(baseline.N_bs) + " J_star=" + fmt(J_star) +
                             " J_hat=" + fmt(outcome.J) + " J_bs=" + fmt(baseline.J) +
                             " probes_plan=" + std::to_string(outcome.diagnostics.lps_solved) +
                             " probes_bs=" + std::to_string(baseline.probes);
    std::cout << line << "\n";
    summary << line << "\n";
  }
  return 0;
}

int cmd_propagate(const CommandOptions& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  const ScenarioScales scales = cfg.scales();
  const ReferenceTrajectory reference = build_reference(cfg.p0_docking, cfg.spin, scales, cfg.N_ub);

  std::ofstream out = open_artifact(opts.out_dir, "reference.csv");
  out << "k,t_s,pdR_m,pdT_m,pdN_m,vdR_mps,vdT_mps,vdN_mps,pd_norm_m\n";
  for (int k = cfg.k0; k <= reference.last_index(); ++k) {
    const PhysicalRelativeState s = denormalize(reference.at(k), scales);
    out << k << ',' << fmt(scales.time_at(k));
    for (int j = 0; j < 3; ++j) out << ',' << fmt(s.p(j));
    for (int j = 0; j < 3; ++j) out << ',' << fmt(s.v(j));
    out << ',' << fmt(s.p.norm()) << '\n';
  }
  std::cout << "wrote " << (reference.last_index() - cfg.k0 + 1) << " reference samples\n";
  return 0;
}

}  // namespace rvd
