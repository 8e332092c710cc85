#pragma once

#include <Eigen/Core>

namespace smpc {

struct AbcVector {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  Eigen::Vector3d vec() const { return {a, b, c}; }
  static AbcVector from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

struct AlphaBetaVector {
  double alpha = 0.0;
  double beta = 0.0;

  Eigen::Vector2d vec() const { return {alpha, beta}; }
  static AlphaBetaVector from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
};

struct DqVector {
  double d = 0.0;
  double q = 0.0;

  Eigen::Vector2d vec() const { return {d, q}; }
  static DqVector from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
};

// Power-invariant Clarke matrix T = sqrt(2/3) [[1, -1/2, -1/2], [0, sqrt3/2, -sqrt3/2]].
// With this scaling T T^T = I, so the pseudo-inverse is T^T.
const Eigen::Matrix<double, 2, 3>& clarke_matrix();
const Eigen::Matrix<double, 3, 2>& clarke_pinv_matrix();

/// Park rotation P(theta) = [[cos, sin], [-sin, cos]] (alpha-beta -> dq).
Eigen::Matrix2d park_matrix(double theta);

AlphaBetaVector clarke(const AbcVector& v);
AbcVector clarke_pinv(const AlphaBetaVector& v);
DqVector park(const AlphaBetaVector& v, double theta);
AlphaBetaVector park_inv(const DqVector& v, double theta);

}  // namespace smpc
