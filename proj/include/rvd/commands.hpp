/**
 * @file commands.hpp
 * @brief Command implementations behind the CLI driver: plan, sweep, compare,
 *        and propagate, each reading a scenario file and writing CSV artifacts.
 *
 * Exit codes: 0 success (plan found, or report generated), 2 planning
 * infeasible; loader and argument errors surface as exceptions for the
 * driver to map to exit code 1.
 */
#pragma once

#include "rvd/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rvd {

/// Inclusive arithmetic progression "a:b:step", or a single value "a".
struct GammaGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  static GammaGrid parse(const std::string& text);  ///< throws ScenarioError
  std::vector<double> values() const;
};

struct CommandOptions {
  std::string config_path;
  std::optional<double> gamma;  ///< overrides the scenario's gamma
  std::optional<int> n_ub;      ///< overrides the scenario's horizon bound
  std::string gamma_grid = "1:15:1";
  std::string out_dir = ".";
  int workers = 0;  ///< 0 selects the hardware concurrency
};

int cmd_plan(const CommandOptions& opts);
int cmd_sweep(const CommandOptions& opts);
int cmd_compare(const CommandOptions& opts);
int cmd_propagate(const CommandOptions& opts);

}  // namespace rvd
