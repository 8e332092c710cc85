#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smpc/controller.hpp"
#include "smpc/plant.hpp"

namespace smpc {

/// Piecewise-constant signal given as (time, value) breakpoints sorted by time.
/// Before the first breakpoint the first value applies.
struct StepProfile {
  std::vector<std::pair<double, double>> points;

  double at(double t) const;
  bool sorted() const;
};

struct SweepGrid {
  std::vector<int> n_h{1, 2, 3};
  std::vector<int> n_k{1, 4, 10};
  std::vector<int> n_l;  // empty: N_l follows N_k
  std::vector<double> lambda{0.1};
  std::vector<ControlMode> mode{ControlMode::kSequential};
};

struct ScenarioConfig {
  double duration = 0.5;
  double t_s = 50e-6;
  int substeps = 10;
  std::uint64_t seed = 1;
  double sensor_noise = 0.0;  // std-dev of additive current measurement noise, A

  PlantParams plant;
  double inertia = 0.05;

  // Initial state
  double omega_m0 = 0.0;
  double theta_e0 = 0.0;
  double v_dc0 = 700.0;
  double v_o0 = 0.0;

  // References
  StepProfile speed_rpm{{{0.0, 1125.0}}};
  StepProfile load_torque{{{0.0, 30.0}}};
  double speed_gain = 2.0;      // N m per rad/s
  double torque_limit = 60.0;   // N m
  double v_dc_ref = 700.0;
  PiState pi;

  ControllerConfig controller;
  SweepGrid grid;
  std::string output_dir = "out";

  void validate() const;
  std::int64_t steps() const;
};

/// One controller period: sensed state at time t, the references in force and
/// the decision applied over [t, t + t_s).
struct StepRecord {
  double t = 0.0;
  double i_d = 0.0, i_q = 0.0;
  double i_alpha = 0.0, i_beta = 0.0;
  double i_ma = 0.0, i_mb = 0.0, i_mc = 0.0;
  double v_dc = 0.0, v_o = 0.0;
  double omega_m = 0.0, omega_e = 0.0, theta_e = 0.0;
  double t_e = 0.0, t_e_ref = 0.0;
  double i_q_ref = 0.0;
  double p = 0.0, q = 0.0, p_ref = 0.0, q_ref = 0.0;
  double v_dc_ref = 0.0;
  double speed_ref = 0.0;
  SwitchState s_m, s_n;
  double j_m = 0.0, j_n = 0.0, j_o = 0.0;
  std::int64_t nodes_m = 0, nodes_n = 0;
};

struct TimeSeries {
  double t_s = 0.0;
  std::vector<StepRecord> records;
};

/// Closed-loop run: control_step and plant_step alternate for duration / t_s
/// steps. Throws SimulationError (with the step index) on blow-up.
TimeSeries run_scenario(const ScenarioConfig& cfg);

}  // namespace smpc
