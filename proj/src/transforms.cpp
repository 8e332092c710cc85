#include "smpc/transforms.hpp"

#include <cmath>

namespace smpc {

const Eigen::Matrix<double, 2, 3>& clarke_matrix() {
  static const Eigen::Matrix<double, 2, 3> t = [] {
    const double k = std::sqrt(2.0 / 3.0);
    const double h = std::sqrt(3.0) / 2.0;
    Eigen::Matrix<double, 2, 3> m;
    m << 1.0, -0.5, -0.5,
         0.0, h, -h;
    return Eigen::Matrix<double, 2, 3>(k * m);
  }();
  return t;
}

const Eigen::Matrix<double, 3, 2>& clarke_pinv_matrix() {
  static const Eigen::Matrix<double, 3, 2> t = clarke_matrix().transpose();
  return t;
}

Eigen::Matrix2d park_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d p;
  p << c, s,
      -s, c;
  return p;
}

AlphaBetaVector clarke(const AbcVector& v) {
  return AlphaBetaVector::from(clarke_matrix() * v.vec());
}

AbcVector clarke_pinv(const AlphaBetaVector& v) {
  return AbcVector::from(clarke_pinv_matrix() * v.vec());
}

DqVector park(const AlphaBetaVector& v, double theta) {
  return DqVector::from(park_matrix(theta) * v.vec());
}

AlphaBetaVector park_inv(const DqVector& v, double theta) {
  return AlphaBetaVector::from(park_matrix(theta).transpose() * v.vec());
}

}  // namespace smpc
