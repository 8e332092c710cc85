#include "smpc/plant.hpp"

#include <cmath>
#include <numbers>

#include "smpc/errors.hpp"

namespace smpc {

SwitchState::SwitchState(int a, int b, int c) {
  for (int v : {a, b, c}) {
    if (v < -1 || v > 1) throw Error("switch level outside {-1, 0, 1}");
  }
  s = {static_cast<std::int8_t>(a), static_cast<std::int8_t>(b), static_cast<std::int8_t>(c)};
}

Eigen::Vector3d SwitchState::abs_vec() const {
  return {double(std::abs(s[0])), double(std::abs(s[1])), double(std::abs(s[2]))};
}

Eigen::Matrix3d converter_gain(const DcLinkState& dc) {
  Eigen::Matrix3d m;
  m << 2, -1, -1,
      -1, 2, -1,
      -1, -1, 2;
  return ((dc.v_dc + dc.v_o) / 6.0) * m;
}

AbcVector converter_voltage(const SwitchState& s, const DcLinkState& dc) {
  return AbcVector::from(converter_gain(dc) * s.vec());
}

DcLinkRate dc_link_derivative(const SwitchState& s_m, const SwitchState& s_n,
                              const AbcVector& i_m_abc, const AbcVector& i_n_abc, double c) {
  const Eigen::Vector3d im = i_m_abc.vec();
  const Eigen::Vector3d in = i_n_abc.vec();
  DcLinkRate r;
  r.dv_dc = (s_m.vec().dot(im) - s_n.vec().dot(in)) / c;
  r.dv_o = (s_m.abs_vec().dot(im) - s_n.abs_vec().dot(in)) / c;
  return r;
}

DqVector machine_derivative(const DqVector& x, const DqVector& u_dq, double omega_e,
                            const MachineParams& p) {
  const double decay = p.r_s / p.l_s;
  DqVector dx;
  dx.d = -decay * x.d + omega_e * x.q + u_dq.d / p.l_s;
  dx.q = -omega_e * x.d - decay * x.q + u_dq.q / p.l_s - p.psi_pm / p.l_s * omega_e;
  return dx;
}

AlphaBetaVector grid_derivative(const AlphaBetaVector& x, const AlphaBetaVector& u_ab,
                                const AlphaBetaVector& e_ab, const GridParams& p) {
  const double decay = p.r_n / p.l_n;
  return {-decay * x.alpha + (u_ab.alpha - e_ab.alpha) / p.l_n,
          -decay * x.beta + (u_ab.beta - e_ab.beta) / p.l_n};
}

AlphaBetaVector grid_emf(double t, const GridParams& p) {
  constexpr double kShift = 2.0 * std::numbers::pi / 3.0;
  const double wt = p.omega_n * t;
  return clarke({p.e_peak * std::cos(wt), p.e_peak * std::cos(wt - kShift),
                 p.e_peak * std::cos(wt + kShift)});
}

PowerOutput power_output(const AlphaBetaVector& x, const AlphaBetaVector& e_ab) {
  return {e_ab.alpha * x.alpha + e_ab.beta * x.beta, e_ab.beta * x.alpha - e_ab.alpha * x.beta};
}

double electromagnetic_torque(double i_q, const MachineParams& p) {
  return 1.5 * p.pole_pairs * p.psi_pm * i_q;
}

double wrap_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative can round up to exactly 2pi
  if (w >= kTwoPi) w = 0.0;
  return w;
}

MechState mech_step(const MechState& m, double t_e, double dt, int pole_pairs) {
  MechState next = m;
  next.omega_m = m.omega_m + dt * (m.t_m - t_e) / m.inertia_j;
  next.omega_e = pole_pairs * next.omega_m;
  next.theta_e = wrap_angle(m.theta_e + dt * next.omega_e);
  return next;
}

namespace {

bool finite(const PlantState& s) {
  return std::isfinite(s.i_m.d) && std::isfinite(s.i_m.q) && std::isfinite(s.i_n.alpha) &&
         std::isfinite(s.i_n.beta) && std::isfinite(s.dc.v_dc) && std::isfinite(s.dc.v_o) &&
         std::isfinite(s.mech.omega_m) && std::isfinite(s.mech.theta_e);
}

}  // namespace

AbcVector machine_phase_currents(const PlantState& st) {
  return clarke_pinv(park_inv(st.i_m, st.mech.theta_e));
}

PlantState plant_step(const PlantState& st, const SwitchState& s_m, const SwitchState& s_n,
                      double dt, int substeps, const PlantParams& params) {
  if (!(dt > 0.0) || substeps < 1) throw Error("plant_step: dt must be > 0 and substeps >= 1");
  if (!finite(st)) throw SimulationError("plant_step: non-finite input state");

  const double h = dt / substeps;
  PlantState x = st;
  for (int k = 0; k < substeps; ++k) {
    const Eigen::Matrix3d tl = converter_gain(x.dc);
    const AlphaBetaVector u_m_ab = clarke(AbcVector::from(tl * s_m.vec()));
    const AlphaBetaVector u_n_ab = clarke(AbcVector::from(tl * s_n.vec()));
    const DqVector u_m_dq = park(u_m_ab, x.mech.theta_e);
    const AlphaBetaVector e_ab = grid_emf(st.t + k * h, params.grid);

    const DqVector dim = machine_derivative(x.i_m, u_m_dq, x.mech.omega_e, params.machine);
    const AlphaBetaVector din = grid_derivative(x.i_n, u_n_ab, e_ab, params.grid);
    const DcLinkRate ddc = dc_link_derivative(s_m, s_n, machine_phase_currents(x),
                                              clarke_pinv(x.i_n), x.dc.c);
    const double t_e = electromagnetic_torque(x.i_m.q, params.machine);

    PlantState next = x;
    next.i_m = {x.i_m.d + h * dim.d, x.i_m.q + h * dim.q};
    next.i_n = {x.i_n.alpha + h * din.alpha, x.i_n.beta + h * din.beta};
    next.dc.v_dc = x.dc.v_dc + h * ddc.dv_dc;
    next.dc.v_o = x.dc.v_o + h * ddc.dv_o;
    next.mech = mech_step(x.mech, t_e, h, params.machine.pole_pairs);
    x = next;
  }
  x.t = st.t + dt;
  if (!finite(x)) throw SimulationError("plant_step: state became non-finite");
  return x;
}

}  // namespace smpc
