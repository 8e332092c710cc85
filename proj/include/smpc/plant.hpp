#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "smpc/transforms.hpp"

namespace smpc {

/// Per-phase switch level of a three-level NPC leg: -1, 0 or +1.
struct SwitchState {
  std::array<std::int8_t, 3> s{0, 0, 0};

  SwitchState() = default;
  SwitchState(int a, int b, int c);

  Eigen::Vector3d vec() const { return {double(s[0]), double(s[1]), double(s[2])}; }
  Eigen::Vector3d abs_vec() const;
  bool operator==(const SwitchState&) const = default;
};

struct DcLinkState {
  double v_dc = 700.0;  // V_dc1 + V_dc2
  double v_o = 0.0;     // V_dc1 - V_dc2
  double c = 1100e-6;   // capacitance of each half, F
};

struct MachineParams {
  double r_s = 0.1379;
  double l_s = 0.019;
  double psi_pm = 0.42675;
  int pole_pairs = 3;
};

struct GridParams {
  double r_n = 0.156;
  double l_n = 0.020;
  double e_peak = 250.0;
  double omega_n = 100.0 * 3.14159265358979323846;
};

struct MechState {
  double omega_m = 0.0;    // rad/s, mechanical
  double omega_e = 0.0;    // rad/s, electrical (= p * omega_m)
  double theta_e = 0.0;    // rad, in [0, 2pi)
  double inertia_j = 0.05; // kg m^2
  double t_m = 0.0;        // applied turbine torque, N m
};

struct PlantParams {
  MachineParams machine;
  GridParams grid;
  double capacitance = 1100e-6;
};

struct PlantState {
  DqVector i_m;         // machine current, dq frame
  AlphaBetaVector i_n;  // grid current, alpha-beta frame
  DcLinkState dc;
  MechState mech;
  double t = 0.0;
};

/// Three-level converter map u_abc = ((v_dc + v_o) / 6) [[2,-1,-1],[-1,2,-1],[-1,-1,2]] s.
Eigen::Matrix3d converter_gain(const DcLinkState& dc);
AbcVector converter_voltage(const SwitchState& s, const DcLinkState& dc);

struct DcLinkRate {
  double dv_dc = 0.0;
  double dv_o = 0.0;
};

DcLinkRate dc_link_derivative(const SwitchState& s_m, const SwitchState& s_n,
                              const AbcVector& i_m_abc, const AbcVector& i_n_abc, double c);

/// PMSG stator current dynamics in the rotor frame (motor sign convention).
DqVector machine_derivative(const DqVector& x, const DqVector& u_dq, double omega_e,
                            const MachineParams& p);

/// RL filter current dynamics in the stationary frame.
AlphaBetaVector grid_derivative(const AlphaBetaVector& x, const AlphaBetaVector& u_ab,
                                const AlphaBetaVector& e_ab, const GridParams& p);

/// Balanced three-phase grid source, mapped to alpha-beta.
AlphaBetaVector grid_emf(double t, const GridParams& p);

struct PowerOutput {
  double p = 0.0;  // W
  double q = 0.0;  // var
};

PowerOutput power_output(const AlphaBetaVector& x, const AlphaBetaVector& e_ab);

double electromagnetic_torque(double i_q, const MachineParams& p);

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta);

MechState mech_step(const MechState& m, double t_e, double dt, int pole_pairs);

/// Advances the plant by `dt` with both switch states held, using `substeps`
/// explicit Euler sub-intervals. Throws SimulationError on a non-finite state.
PlantState plant_step(const PlantState& st, const SwitchState& s_m, const SwitchState& s_n,
                      double dt, int substeps, const PlantParams& params);

/// Machine phase currents reconstructed from the dq state.
AbcVector machine_phase_currents(const PlantState& st);

}  // namespace smpc
