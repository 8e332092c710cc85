#include "smpc/prediction.hpp"

#include "smpc/errors.hpp"

namespace smpc {

SwitchSequence::SwitchSequence(int horizon) : u_(static_cast<std::size_t>(3 * horizon), 0) {}

SwitchSequence::SwitchSequence(std::vector<std::int8_t> levels) : u_(std::move(levels)) {
  if (u_.size() % 3 != 0) throw Error("switch sequence length must be a multiple of 3");
  for (auto v : u_) {
    if (v < -1 || v > 1) throw Error("switch level outside {-1, 0, 1}");
  }
}

SwitchSequence SwitchSequence::repeat(const SwitchState& s, int horizon) {
  SwitchSequence seq(horizon);
  for (int k = 0; k < horizon; ++k) {
    for (int p = 0; p < 3; ++p) seq[3 * k + p] = s.s[static_cast<std::size_t>(p)];
  }
  return seq;
}

SwitchState SwitchSequence::block(int stage) const {
  return SwitchState((*this)[3 * stage], (*this)[3 * stage + 1], (*this)[3 * stage + 2]);
}

Eigen::VectorXd SwitchSequence::vec() const {
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v(i) = (*this)[i];
  return v;
}

DiscreteModel discretize(const LinearSubsystem& sys, double t_s) {
  if (!(t_s > 0.0)) throw Error("discretize: sampling period must be positive");
  DiscreteModel d;
  d.a = Eigen::Matrix2d::Identity() + t_s * sys.f;
  d.b = t_s * sys.g;
  d.n = t_s * sys.h;
  d.c = sys.c;
  d.t_s = t_s;
  return d;
}

LinearSubsystem build_machine_subsystem(const MachineParams& p, double omega_e,
                                        const DcLinkState& dc, double theta_e) {
  LinearSubsystem sys;
  const double decay = p.r_s / p.l_s;
  sys.f << -decay, omega_e,
           -omega_e, -decay;
  sys.g = (1.0 / p.l_s) * park_matrix(theta_e) * clarke_matrix() * converter_gain(dc);
  sys.h << 0.0, -p.psi_pm / p.l_s * omega_e;
  sys.c.setIdentity();
  return sys;
}

LinearSubsystem build_grid_subsystem(const GridParams& p, const AlphaBetaVector& e_ab,
                                     const DcLinkState& dc) {
  LinearSubsystem sys;
  sys.f = -(p.r_n / p.l_n) * Eigen::Matrix2d::Identity();
  sys.g = (1.0 / p.l_n) * clarke_matrix() * converter_gain(dc);
  sys.h = -e_ab.vec() / p.l_n;
  sys.c << e_ab.alpha, e_ab.beta,
           e_ab.beta, -e_ab.alpha;
  return sys;
}

MultistepModel build_multistep(const DiscreteModel& d, int n_h) {
  if (n_h < 1) throw Error("build_multistep: horizon must be >= 1");
  MultistepModel m;
  m.horizon = n_h;
  m.xi = Eigen::MatrixXd::Zero(2 * n_h, 3 * n_h);
  m.gamma = Eigen::MatrixXd::Zero(2 * n_h, 2);
  m.n_vec = Eigen::VectorXd::Zero(2 * n_h);
  m.s_mat = Eigen::MatrixXd::Zero(3 * n_h, 3 * n_h);
  m.e_mat = Eigen::MatrixXd::Zero(3 * n_h, 3);

  // powers[l] = A^l, l = 0..n_h
  std::vector<Eigen::Matrix2d> powers(static_cast<std::size_t>(n_h) + 1);
  powers[0].setIdentity();
  for (int l = 1; l <= n_h; ++l) powers[l] = d.a * powers[l - 1];

  Eigen::Vector2d drift = Eigen::Vector2d::Zero();  // sum_{l<=r} A^l n
  for (int r = 0; r < n_h; ++r) {
    for (int c = 0; c <= r; ++c) {
      m.xi.block<2, 3>(2 * r, 3 * c) = d.c * powers[r - c] * d.b;
    }
    m.gamma.block<2, 2>(2 * r, 0) = d.c * powers[r + 1];
    drift += powers[r] * d.n;
    m.n_vec.segment<2>(2 * r) = d.c * drift;

    m.s_mat.block<3, 3>(3 * r, 3 * r).setIdentity();
    if (r > 0) m.s_mat.block<3, 3>(3 * r, 3 * (r - 1)) = -Eigen::Matrix3d::Identity();
  }
  m.e_mat.block<3, 3>(0, 0).setIdentity();
  return m;
}

std::vector<double> predict_vo_sequence(const PlantState& st, const SwitchSequence& u_m,
                                        const SwitchSequence& u_n, const DiscreteModel& machine,
                                        const DiscreteModel& grid) {
  if (u_m.horizon() != u_n.horizon()) {
    throw SolverError(SolverErrorKind::kDimensionMismatch,
                      "predict_vo_sequence: machine and grid horizons differ");
  }
  const int n_h = u_m.horizon();
  const Eigen::Matrix<double, 3, 2> machine_to_abc =
      clarke_pinv_matrix() * park_matrix(st.mech.theta_e).transpose();
  const Eigen::Matrix<double, 3, 2>& grid_to_abc = clarke_pinv_matrix();
  const double gain = machine.t_s / st.dc.c;

  Eigen::Vector2d x_m = st.i_m.vec();
  Eigen::Vector2d x_n = st.i_n.vec();
  double v_o = st.dc.v_o;
  std::vector<double> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_h));
  for (int k = 0; k < n_h; ++k) {
    const SwitchState s_m = u_m.block(k);
    const SwitchState s_n = u_n.block(k);
    v_o += gain * (s_m.abs_vec().dot(machine_to_abc * x_m) - s_n.abs_vec().dot(grid_to_abc * x_n));
    trajectory.push_back(v_o);
    x_m = machine.a * x_m + machine.b * s_m.vec() + machine.n;
    x_n = grid.a * x_n + grid.b * s_n.vec() + grid.n;
  }
  return trajectory;
}

}  // namespace smpc
