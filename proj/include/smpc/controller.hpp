#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "smpc/plant.hpp"
#include "smpc/prediction.hpp"
#include "smpc/solver.hpp"

namespace smpc {

enum class ControlMode {
  kSequential,  // k-best outer loops followed by the DC-link balance inner loop
  kStandardSd,  // best-1 sphere decoding on each side, no balance control
};

std::string to_string(ControlMode mode);
ControlMode parse_mode(const std::string& text);

struct ControllerConfig {
  int n_h = 3;
  int n_k = 4;
  int n_l = 4;
  double lambda = 0.1;
  double lambda_v = 0.02;  // parsed for completeness; not used by this controller
  double t_s = 50e-6;
  ControlMode mode = ControlMode::kSequential;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  int machine_candidates() const { return mode == ControlMode::kStandardSd ? 1 : n_k; }
  int grid_candidates() const { return mode == ControlMode::kStandardSd ? 1 : n_l; }
};

struct PiState {
  double integral = 0.0;
  double k_p = 0.5;    // A/V
  double k_i = 20.0;   // A/(V s)
  double clamp = 50.0; // A, applies to the output and the integral contribution
};

struct ReferenceState {
  double t_e_ref = 0.0;
  double omega_m_ref = 0.0;
  DqVector i_dq_ref;
  double p_ref = 0.0;
  double q_ref = 0.0;
  double i_g_ref = 0.0;
  PiState pi;
  double v_dc_ref = 700.0;
};

struct ControlDecision {
  SwitchState s_m;
  SwitchState s_n;
  SwitchSequence full_u_m;
  SwitchSequence full_u_n;
  double j_m = 0.0;
  double j_n = 0.0;
  double j_o = 0.0;
  std::int64_t nodes_m = 0;
  std::int64_t nodes_n = 0;
};

/// Current, power and DC-link references for one controller period. The
/// torque and speed references are supplied by the caller in `refs`.
ReferenceState build_references(const PlantState& st, const MachineParams& machine,
                                 ReferenceState refs, double dt);

/// Repeats a two-element output reference over the horizon.
Eigen::VectorXd stack_reference(const Eigen::Vector2d& block, int n_h);
Eigen::VectorXd stack_machine_reference(const ReferenceState& refs, int n_h);
Eigen::VectorXd stack_grid_reference(const ReferenceState& refs, int n_h);

/// Everything the controller derives from the sensed state before solving.
struct StepModels {
  DiscreteModel machine;
  DiscreteModel grid;
  MultistepModel machine_multistep;
  MultistepModel grid_multistep;
  QpForm machine_qp;
  QpForm grid_qp;
};

StepModels build_step_models(const PlantState& st, const PlantParams& params,
                             const ControllerConfig& cfg, const ReferenceState& refs,
                             const SwitchState& u_prev_m, const SwitchState& u_prev_n);

ControlDecision control_step(const PlantState& st, const PlantParams& params,
                             const ControllerConfig& cfg, const ReferenceState& refs,
                             const SwitchState& u_prev_m, const SwitchState& u_prev_n);

}  // namespace smpc
