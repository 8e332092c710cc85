#include "smpc/controller.hpp"

#include <algorithm>
#include <numeric>

#include "smpc/errors.hpp"

namespace smpc {

std::string to_string(ControlMode mode) {
  return mode == ControlMode::kSequential ? "sequential" : "standard_sd";
}

ControlMode parse_mode(const std::string& text) {
  if (text == "sequential") return ControlMode::kSequential;
  if (text == "standard_sd") return ControlMode::kStandardSd;
  throw ConfigError("unknown controller mode '" + text + "' (expected sequential|standard_sd)");
}

void ControllerConfig::validate() const {
  if (n_h < 1) throw ConfigError("horizon must be >= 1");
  if (n_h > 5) throw ConfigError("horizon must be <= 5");
  if (n_k < 1 || n_l < 1) throw ConfigError("candidate counts must be >= 1");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(t_s > 0.0)) throw ConfigError("sampling period must be positive");
}

ReferenceState build_references(const PlantState& st, const MachineParams& machine,
                                ReferenceState refs, double dt) {
  if (!(dt > 0.0)) throw Error("build_references: dt must be positive");
  refs.i_dq_ref.d = 0.0;
  refs.i_dq_ref.q = refs.t_e_ref / (1.5 * machine.pole_pairs * machine.psi_pm);

  // Positive P exports to the grid and discharges the link, so a surplus
  // (v_dc above reference) must raise the exported current.
  PiState& pi = refs.pi;
  const double error = st.dc.v_dc - refs.v_dc_ref;
  pi.integral += dt * error;
  if (pi.k_i > 0.0) {
    const double limit = pi.clamp / pi.k_i;
    pi.integral = std::clamp(pi.integral, -limit, limit);
  }
  refs.i_g_ref = std::clamp(pi.k_p * error + pi.k_i * pi.integral, -pi.clamp, pi.clamp);

  refs.p_ref = st.dc.v_dc * refs.i_g_ref + refs.omega_m_ref * refs.t_e_ref;
  refs.q_ref = 0.0;
  return refs;
}

Eigen::VectorXd stack_reference(const Eigen::Vector2d& block, int n_h) {
  if (n_h < 1) throw Error("stack_reference: horizon must be >= 1");
  Eigen::VectorXd y(2 * n_h);
  for (int r = 0; r < n_h; ++r) y.segment<2>(2 * r) = block;
  return y;
}

Eigen::VectorXd stack_machine_reference(const ReferenceState& refs, int n_h) {
  return stack_reference(refs.i_dq_ref.vec(), n_h);
}

Eigen::VectorXd stack_grid_reference(const ReferenceState& refs, int n_h) {
  return stack_reference(Eigen::Vector2d(refs.p_ref, refs.q_ref), n_h);
}

StepModels build_step_models(const PlantState& st, const PlantParams& params,
                             const ControllerConfig& cfg, const ReferenceState& refs,
                             const SwitchState& u_prev_m, const SwitchState& u_prev_n) {
  StepModels m;
  const AlphaBetaVector e_ab = grid_emf(st.t, params.grid);
  m.machine = discretize(
      build_machine_subsystem(params.machine, st.mech.omega_e, st.dc, st.mech.theta_e), cfg.t_s);
  m.grid = discretize(build_grid_subsystem(params.grid, e_ab, st.dc), cfg.t_s);
  m.machine_multistep = build_multistep(m.machine, cfg.n_h);
  m.grid_multistep = build_multistep(m.grid, cfg.n_h);
  m.machine_qp = assemble_qp(m.machine_multistep, st.i_m.vec(),
                             stack_machine_reference(refs, cfg.n_h), u_prev_m, cfg.lambda);
  m.grid_qp = assemble_qp(m.grid_multistep, st.i_n.vec(), stack_grid_reference(refs, cfg.n_h),
                          u_prev_n, cfg.lambda);
  return m;
}

ControlDecision control_step(const PlantState& st, const PlantParams& params,
                             const ControllerConfig& cfg, const ReferenceState& refs,
                             const SwitchState& u_prev_m, const SwitchState& u_prev_n) {
  const StepModels models = build_step_models(st, params, cfg, refs, u_prev_m, u_prev_n);

  const CandidateList machine = k_best(models.machine_qp, cfg.machine_candidates());
  const CandidateList grid = k_best(models.grid_qp, cfg.grid_candidates());
  if (machine.items.empty() || grid.items.empty()) {
    throw SolverError(SolverErrorKind::kEmptyFeasibleSet, "control_step: no candidates");
  }

  ControlDecision d;
  d.nodes_m = machine.nodes_visited;
  d.nodes_n = grid.nodes_visited;
  int mi = 0;
  int gi = 0;
  if (cfg.mode == ControlMode::kSequential) {
    const PairSelection pair = select_pair(st, machine, grid, models.machine, models.grid);
    mi = pair.machine_index;
    gi = pair.grid_index;
    d.j_o = pair.j_o;
  } else {
    const auto trajectory = predict_vo_sequence(st, machine.items[0].u, grid.items[0].u,
                                                models.machine, models.grid);
    d.j_o = std::inner_product(trajectory.begin(), trajectory.end(), trajectory.begin(), 0.0);
  }
  d.full_u_m = machine.items[static_cast<std::size_t>(mi)].u;
  d.full_u_n = grid.items[static_cast<std::size_t>(gi)].u;
  d.j_m = machine.items[static_cast<std::size_t>(mi)].cost;
  d.j_n = grid.items[static_cast<std::size_t>(gi)].cost;
  d.s_m = d.full_u_m.block(0);
  d.s_n = d.full_u_n.block(0);
  return d;
}

}  // namespace smpc
