#include "rvd/commands.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Minimum time-plus-fuel rendezvous and docking planner for tumbling targets"};
  app.require_subcommand(1);

  rvd::CommandOptions opts;
  double gamma_override = 0.0;
  int n_ub_override = 0;

  struct Subcommand {
    const char* name;
    const char* desc;
  };
  const Subcommand defs[4] = {
      {"plan", "Optimize one maneuver; writes plan.csv and a summary"},
      {"sweep", "Solve every horizon in [1, N_ub]; writes profile.csv"},
      {"compare", "Run the gamma-grid search study; writes compare.csv"},
      {"propagate", "Sample the docking-point track; writes reference.csv"},
  };
  CLI::App* subs[4];
  CLI::Option* gamma_opts[4];
  CLI::Option* nub_opts[4];
  for (int i = 0; i < 4; ++i) {
    CLI::App* cmd = app.add_subcommand(defs[i].name, defs[i].desc);
    cmd->add_option("--config", opts.config_path, "Scenario file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    gamma_opts[i] = cmd->add_option("--gamma", gamma_override, "Override the scenario fuel weight");
    nub_opts[i] = cmd->add_option("--n-ub", n_ub_override, "Override the horizon upper bound");
    cmd->add_option("--out", opts.out_dir, "Output directory for artifacts (default: .)");
    cmd->add_option("--workers", opts.workers, "Worker threads for sweeps (0 = all cores)");
    if (std::string(defs[i].name) == "compare") {
      cmd->add_option("--gamma-grid", opts.gamma_grid, "Grid start:stop:step (default 1:15:1)");
    }
    subs[i] = cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (int i = 0; i < 4; ++i) {
      if (!subs[i]->parsed()) continue;
      if (gamma_opts[i]->count() > 0) opts.gamma = gamma_override;
      if (nub_opts[i]->count() > 0) opts.n_ub = n_ub_override;
      switch (i) {
        case 0:
          return rvd::cmd_plan(opts);
        case 1:
          return rvd::cmd_sweep(opts);
        case 2:
          return rvd::cmd_compare(opts);
        default:
          return rvd::cmd_propagate(opts);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
