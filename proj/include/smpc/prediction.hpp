#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "smpc/plant.hpp"

namespace smpc {

/// Continuous-time affine model x' = f x + g s + h, y = c x, with the switch
/// vector s as input.
struct LinearSubsystem {
  Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
  Eigen::Matrix<double, 2, 3> g = Eigen::Matrix<double, 2, 3>::Zero();
  Eigen::Vector2d h = Eigen::Vector2d::Zero();
  Eigen::Matrix2d c = Eigen::Matrix2d::Identity();
};

/// Forward-Euler discretization x[k+1] = a x[k] + b s[k] + n.
struct DiscreteModel {
  Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
  Eigen::Matrix<double, 2, 3> b = Eigen::Matrix<double, 2, 3>::Zero();
  Eigen::Vector2d n = Eigen::Vector2d::Zero();
  Eigen::Matrix2d c = Eigen::Matrix2d::Identity();
  double t_s = 0.0;
};

/// Condensed horizon model Y = xi U + gamma x0 + n_vec and the effort map
/// dU = s_mat U - e_mat u_prev.
struct MultistepModel {
  Eigen::MatrixXd xi;
  Eigen::MatrixXd gamma;
  Eigen::VectorXd n_vec;
  Eigen::MatrixXd s_mat;
  Eigen::MatrixXd e_mat;
  int horizon = 0;
};

/// Stacked switch levels for a whole horizon, three entries per stage.
/// Ordering is lexicographic with -1 < 0 < 1.
class SwitchSequence {
 public:
  SwitchSequence() = default;
  explicit SwitchSequence(int horizon);
  explicit SwitchSequence(std::vector<std::int8_t> levels);
  static SwitchSequence repeat(const SwitchState& s, int horizon);

  int horizon() const { return static_cast<int>(u_.size() / 3); }
  int size() const { return static_cast<int>(u_.size()); }
  std::int8_t operator[](int i) const { return u_[static_cast<std::size_t>(i)]; }
  std::int8_t& operator[](int i) { return u_[static_cast<std::size_t>(i)]; }
  const std::vector<std::int8_t>& levels() const { return u_; }

  SwitchState block(int stage) const;
  Eigen::VectorXd vec() const;

  auto operator<=>(const SwitchSequence&) const = default;
  bool operator==(const SwitchSequence&) const = default;

 private:
  std::vector<std::int8_t> u_;
};

DiscreteModel discretize(const LinearSubsystem& sys, double t_s);

/// Machine side: stator dq dynamics with the input lifted from dq volts to the
/// abc switch vector, g = (1/L_s) P(theta) T T_l. Output matrix is identity.
LinearSubsystem build_machine_subsystem(const MachineParams& p, double omega_e,
                                        const DcLinkState& dc, double theta_e);

/// Grid side: RL filter with g = (1/L_n) T T_l and the (P, Q) output map
/// c = [[e_a, e_b], [e_b, -e_a]].
LinearSubsystem build_grid_subsystem(const GridParams& p, const AlphaBetaVector& e_ab,
                                     const DcLinkState& dc);

MultistepModel build_multistep(const DiscreteModel& d, int n_h);

/// Iterates the one-step balance predictor along a candidate pair and returns
/// V_O at stages 1..N_h. Machine and grid states are propagated with their
/// discrete models; the Park angle is frozen at the current value.
std::vector<double> predict_vo_sequence(const PlantState& st, const SwitchSequence& u_m,
                                        const SwitchSequence& u_n, const DiscreteModel& machine,
                                        const DiscreteModel& grid);

}  // namespace smpc
