#pragma once

#include <string>
#include <vector>

#include "smpc/metrics.hpp"
#include "smpc/scenario.hpp"

namespace smpc {

struct SweepRow {
  ControllerConfig controller;
  bool ok = true;
  std::string error;
  RunMetrics metrics;
};

/// Cross product of the grid lists, in list order (N_h outermost).
std::vector<ControllerConfig> expand_grid(const ControllerConfig& base, const SweepGrid& grid);

/// Runs every configuration of `cfg.grid`. Failed runs become rows with
/// ok = false and the sweep continues. `workers` <= 1 runs sequentially.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, int workers = 1);

}  // namespace smpc
