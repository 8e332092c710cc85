#include <sstream>

#include <doctest.h>

#include "smpc/csv.hpp"
#include "smpc/errors.hpp"
#include "smpc/metrics.hpp"
#include "smpc/scenario.hpp"
#include "smpc/sweep.hpp"

using namespace smpc;

namespace {

ScenarioConfig short_run(double duration = 0.001) {
  ScenarioConfig cfg;
  cfg.duration = duration;
  return cfg;
}

std::string timeseries_text(const TimeSeries& ts) {
  std::ostringstream out;
  write_timeseries_csv(out, ts);
  return out.str();
}

}  // namespace

TEST_CASE("one record per controller period") {
  const TimeSeries ts = run_scenario(short_run());
  REQUIRE(ts.records.size() == 20);
  CHECK(ts.t_s == 50e-6);
  for (std::size_t i = 0; i < ts.records.size(); ++i) {
    CHECK(ts.records[i].t == doctest::Approx(static_cast<double>(i) * 50e-6));
  }
  CHECK(ts.records.front().v_dc == 700.0);
  CHECK(ts.records.front().speed_ref == doctest::Approx(1125.0 * 2 * 3.141592653589793 / 60.0));
}

TEST_CASE("runs are deterministic") {
  ScenarioConfig cfg = short_run(0.005);
  cfg.sensor_noise = 0.05;
  cfg.seed = 42;
  const std::string a = timeseries_text(run_scenario(cfg));
  const std::string b = timeseries_text(run_scenario(cfg));
  CHECK(a == b);

  cfg.seed = 43;
  CHECK(timeseries_text(run_scenario(cfg)) != a);
}

TEST_CASE("a plant with no sources at rest stays at rest") {
  ScenarioConfig cfg = short_run(0.005);
  cfg.plant.grid.e_peak = 0.0;
  cfg.speed_rpm = StepProfile{{{0.0, 0.0}}};
  cfg.load_torque = StepProfile{{{0.0, 0.0}}};
  const TimeSeries ts = run_scenario(cfg);
  for (const StepRecord& r : ts.records) {
    CHECK(r.i_d == 0.0);
    CHECK(r.i_q == 0.0);
    CHECK(r.omega_m == 0.0);
    CHECK(r.v_dc == 700.0);
    CHECK(r.v_o == 0.0);
    CHECK(r.s_m == SwitchState(0, 0, 0));
    CHECK(r.s_n == SwitchState(0, 0, 0));
  }
}

TEST_CASE("invalid scenarios are rejected before running") {
  ScenarioConfig cfg = short_run();
  cfg.controller.n_h = 0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg = short_run();
  cfg.substeps = 0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg = short_run();
  cfg.v_o0 = 800.0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
}

TEST_CASE("sweep rows follow the grid cross product") {
  ScenarioConfig cfg = short_run(0.002);
  cfg.grid.n_h = {1, 2};
  cfg.grid.n_k = {1, 3};
  cfg.grid.lambda = {0.1, 0.3};
  cfg.grid.mode = {ControlMode::kSequential, ControlMode::kStandardSd};
  const auto rows = sweep(cfg);
  REQUIRE(rows.size() == 16);
  CHECK(rows[0].controller.n_h == 1);
  CHECK(rows[15].controller.n_h == 2);
  CHECK(rows[15].controller.n_k == 3);
  CHECK(rows[15].controller.n_l == 3);
  CHECK(rows[1].controller.mode == ControlMode::kStandardSd);
  for (const auto& r : rows) CHECK(r.ok);

  std::ostringstream out;
  write_metrics_csv(out, rows);
  std::size_t lines = 0;
  for (char c : out.str()) lines += c == '\n';
  CHECK(lines == 17);
}

TEST_CASE("failed runs become rows and the sweep continues") {
  ScenarioConfig cfg = short_run(0.002);
  cfg.grid.n_h = {1, 9, 2};
  cfg.grid.n_k = {2};
  const auto rows = sweep(cfg, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  CHECK(rows[1].error.find("horizon") != std::string::npos);
  CHECK(rows[2].ok);
}

TEST_CASE("longer horizons visit more nodes") {
  ScenarioConfig cfg = short_run(0.01);
  cfg.controller.n_k = cfg.controller.n_l = 1;
  cfg.controller.n_h = 1;
  const double one = compute_metrics(run_scenario(cfg)).avg_nodes;
  cfg.controller.n_h = 3;
  const double three = compute_metrics(run_scenario(cfg)).avg_nodes;
  CHECK(one > 0.0);
  CHECK(three > one);
}

TEST_CASE("divergence is reported with its step") {
  ScenarioConfig cfg = short_run(0.05);
  cfg.substeps = 1;
  cfg.omega_m0 = 1e6;
  try {
    run_scenario(cfg);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() < 1000);
  }
}
