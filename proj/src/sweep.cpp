#include "smpc/sweep.hpp"

#include <algorithm>
#include <future>

#include "smpc/errors.hpp"

namespace smpc {

std::vector<ControllerConfig> expand_grid(const ControllerConfig& base, const SweepGrid& grid) {
  if (grid.n_h.empty() || grid.n_k.empty() || grid.lambda.empty() || grid.mode.empty()) {
    throw ConfigError("sweep grid lists must be non-empty");
  }
  std::vector<ControllerConfig> out;
  for (int n_h : grid.n_h) {
    for (std::size_t ki = 0; ki < grid.n_k.size(); ++ki) {
      // Without an explicit N_l list the grid side uses the machine-side count.
      const std::vector<int> n_l_list =
          grid.n_l.empty() ? std::vector<int>{grid.n_k[ki]} : grid.n_l;
      for (int n_l : n_l_list) {
        for (double lambda : grid.lambda) {
          for (ControlMode mode : grid.mode) {
            ControllerConfig c = base;
            c.n_h = n_h;
            c.n_k = grid.n_k[ki];
            c.n_l = n_l;
            c.lambda = lambda;
            c.mode = mode;
            out.push_back(c);
          }
        }
      }
    }
  }
  return out;
}

namespace {

SweepRow run_one(const ScenarioConfig& base, const ControllerConfig& controller) {
  SweepRow row;
  row.controller = controller;
  try {
    ScenarioConfig cfg = base;
    cfg.controller = controller;
    row.metrics = compute_metrics(run_scenario(cfg));
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, int workers) {
  const auto configs = expand_grid(cfg.controller, cfg.grid);
  std::vector<SweepRow> rows(configs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) rows[i] = run_one(cfg, configs[i]);
    return rows;
  }
  // Batches of `workers` concurrent runs; rows keep grid order.
  for (std::size_t start = 0; start < configs.size(); start += static_cast<std::size_t>(workers)) {
    const std::size_t end = std::min(configs.size(), start + static_cast<std::size_t>(workers));
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, run_one, std::cref(cfg), configs[i]));
    }
    for (std::size_t i = start; i < end; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

}  // namespace smpc
