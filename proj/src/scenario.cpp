#include "smpc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "smpc/errors.hpp"

namespace smpc {

double StepProfile::at(double t) const {
  if (points.empty()) return 0.0;
  double v = points.front().second;
  for (const auto& [time, value] : points) {
    if (time > t) break;
    v = value;
  }
  return v;
}

bool StepProfile::sorted() const {
  return std::is_sorted(points.begin(), points.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; });
}

void ScenarioConfig::validate() const {
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (!(t_s > 0.0)) throw ConfigError("t_s must be positive");
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  if (!(sensor_noise >= 0.0)) throw ConfigError("sensor_noise must be >= 0");
  if (!(inertia > 0.0)) throw ConfigError("inertia must be positive");
  if (!(plant.capacitance > 0.0)) throw ConfigError("capacitance must be positive");
  if (!(plant.machine.l_s > 0.0) || !(plant.grid.l_n > 0.0)) {
    throw ConfigError("inductances must be positive");
  }
  if (plant.machine.r_s < 0.0 || plant.grid.r_n < 0.0) throw ConfigError("resistances must be >= 0");
  if (!(plant.machine.psi_pm > 0.0)) throw ConfigError("psi_pm must be positive");
  if (plant.machine.pole_pairs < 1) throw ConfigError("pole_pairs must be >= 1");
  if (!(plant.grid.e_peak >= 0.0)) throw ConfigError("grid e_peak must be >= 0");
  if (!(plant.grid.omega_n > 0.0)) throw ConfigError("grid omega_n must be positive");
  if (!(v_dc0 > 0.0) || !(std::abs(v_o0) < v_dc0)) throw ConfigError("invalid initial DC link");
  if (!speed_rpm.sorted() || !load_torque.sorted()) {
    throw ConfigError("reference profiles must be sorted by time");
  }
  if (!(torque_limit > 0.0)) throw ConfigError("torque_limit must be positive");
  controller.validate();
  if (std::abs(controller.t_s - t_s) > 1e-15) {
    throw ConfigError("controller t_s must equal the scenario t_s");
  }
}

std::int64_t ScenarioConfig::steps() const {
  return static_cast<std::int64_t>(std::llround(duration / t_s));
}

namespace {

// Beyond this magnitude the controller models lose all precision; treat as blow-up.
constexpr double kBlowUpLimit = 1e12;

bool finite_state(const PlantState& st) {
  for (double v : {st.i_m.d, st.i_m.q, st.i_n.alpha, st.i_n.beta, st.dc.v_dc, st.dc.v_o, st.mech.omega_m,
                   st.mech.omega_e}) {
    if (!std::isfinite(v) || std::abs(v) > kBlowUpLimit) return false;
  }
  return true;
}

}  // namespace

TimeSeries run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const PlantParams& params = cfg.plant;

  PlantState st;
  st.dc = {cfg.v_dc0, cfg.v_o0, params.capacitance};
  st.mech.inertia_j = cfg.inertia;
  st.mech.omega_m = cfg.omega_m0;
  st.mech.omega_e = params.machine.pole_pairs * cfg.omega_m0;
  st.mech.theta_e = wrap_angle(cfg.theta_e0);

  ReferenceState refs;
  refs.pi = cfg.pi;
  refs.v_dc_ref = cfg.v_dc_ref;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  SwitchState u_prev_m;
  SwitchState u_prev_n;
  TimeSeries ts;
  ts.t_s = cfg.t_s;
  const std::int64_t n = cfg.steps();
  ts.records.reserve(static_cast<std::size_t>(n));

  for (std::int64_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * cfg.t_s;
    st.t = t;
    st.mech.t_m = cfg.load_torque.at(t);
    if (!finite_state(st)) throw SimulationError("plant state diverged at step " + std::to_string(k), k);

    PlantState sensed = st;
    if (cfg.sensor_noise > 0.0) {
      sensed.i_m.d += cfg.sensor_noise * noise(rng);
      sensed.i_m.q += cfg.sensor_noise * noise(rng);
      sensed.i_n.alpha += cfg.sensor_noise * noise(rng);
      sensed.i_n.beta += cfg.sensor_noise * noise(rng);
    }

    const double omega_ref = cfg.speed_rpm.at(t) * 2.0 * std::numbers::pi / 60.0;
    refs.omega_m_ref = omega_ref;
    refs.t_e_ref = std::clamp(cfg.speed_gain * (sensed.mech.omega_m - omega_ref),
                              -cfg.torque_limit, cfg.torque_limit);
    refs = build_references(sensed, params.machine, refs, cfg.t_s);

    const ControlDecision d = control_step(sensed, params, cfg.controller, refs, u_prev_m, u_prev_n);

    StepRecord r;
    r.t = t;
    r.i_d = st.i_m.d;
    r.i_q = st.i_m.q;
    r.i_alpha = st.i_n.alpha;
    r.i_beta = st.i_n.beta;
    const AbcVector iabc = machine_phase_currents(st);
    r.i_ma = iabc.a;
    r.i_mb = iabc.b;
    r.i_mc = iabc.c;
    r.v_dc = st.dc.v_dc;
    r.v_o = st.dc.v_o;
    r.omega_m = st.mech.omega_m;
    r.omega_e = st.mech.omega_e;
    r.theta_e = st.mech.theta_e;
    r.t_e = electromagnetic_torque(st.i_m.q, params.machine);
    r.t_e_ref = refs.t_e_ref;
    r.i_q_ref = refs.i_dq_ref.q;
    const PowerOutput pq = power_output(st.i_n, grid_emf(t, params.grid));
    r.p = pq.p;
    r.q = pq.q;
    r.p_ref = refs.p_ref;
    r.q_ref = refs.q_ref;
    r.v_dc_ref = refs.v_dc_ref;
    r.speed_ref = omega_ref;
    r.s_m = d.s_m;
    r.s_n = d.s_n;
    r.j_m = d.j_m;
    r.j_n = d.j_n;
    r.j_o = d.j_o;
    r.nodes_m = d.nodes_m;
    r.nodes_n = d.nodes_n;
    ts.records.push_back(r);

    try {
      st = plant_step(st, d.s_m, d.s_n, cfg.t_s, cfg.substeps, params);
    } catch (const SimulationError& e) {
      throw SimulationError(std::string(e.what()) + " at step " + std::to_string(k), k);
    }
    u_prev_m = d.s_m;
    u_prev_n = d.s_n;
  }
  return ts;
}

}  // namespace smpc
