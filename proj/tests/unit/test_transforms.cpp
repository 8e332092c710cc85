#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <doctest.h>

#include "smpc/transforms.hpp"
#include "support.hpp"

using namespace smpc;
using smpc::test::kPropertyCases;
using smpc::test::uniform;

namespace {

// sqrt(2/3) * 1.5, by hand.
constexpr double kSqrt3Over2 = 1.2247448713915890;

}  // namespace

TEST_CASE("clarke examples") {
  const AlphaBetaVector zero = clarke({1.0, 1.0, 1.0});
  CHECK(zero.alpha == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(zero.beta) < 1e-15);

  const AlphaBetaVector a = clarke({1.0, -0.5, -0.5});
  CHECK(a.alpha == doctest::Approx(kSqrt3Over2).epsilon(1e-12));
  CHECK(std::abs(a.beta) < 1e-15);

  const double h = std::sqrt(3.0) / 2.0;
  const AlphaBetaVector b = clarke({0.0, h, -h});
  CHECK(std::abs(b.alpha) < 1e-15);
  CHECK(b.beta == doctest::Approx(kSqrt3Over2).epsilon(1e-12));
}

TEST_CASE("clarke_pinv examples") {
  const AbcVector z = clarke_pinv({0.0, 0.0});
  CHECK(z.a == 0.0);
  CHECK(z.b == 0.0);
  CHECK(z.c == 0.0);

  const AbcVector w = clarke_pinv(clarke({1.0, -1.0, 0.0}));
  CHECK(w.a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.b == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(w.c) < 1e-12);

  const AbcVector u = clarke_pinv({1.0, 0.0});
  CHECK(u.a == doctest::Approx(0.816496580927726).epsilon(1e-12));
  CHECK(u.b == doctest::Approx(-0.408248290463863).epsilon(1e-12));
  CHECK(u.c == doctest::Approx(-0.408248290463863).epsilon(1e-12));
}

TEST_CASE("pseudo-inverse matches the Moore-Penrose formula") {
  const Eigen::Matrix<double, 2, 3>& t = clarke_matrix();
  const Eigen::Matrix<double, 3, 2> pinv = t.transpose() * (t * t.transpose()).inverse();
  CHECK((pinv - clarke_pinv_matrix()).norm() < 1e-14);
  CHECK((t * t.transpose() - Eigen::Matrix2d::Identity()).norm() < 1e-14);
}

TEST_CASE("park examples") {
  const DqVector same = park({0.3, -2.0}, 0.0);
  CHECK(same.d == 0.3);
  CHECK(same.q == -2.0);

  const DqVector r = park({1.0, 0.0}, std::numbers::pi / 2);
  CHECK(std::abs(r.d) < 1e-15);
  CHECK(r.q == doctest::Approx(-1.0).epsilon(1e-15));

  const AlphaBetaVector back = park_inv({0.0, -1.0}, std::numbers::pi / 2);
  CHECK(back.alpha == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(back.beta) < 1e-15);

  const AlphaBetaVector id = park_inv({4.0, 5.0}, 0.0);
  CHECK(id.alpha == 4.0);
  CHECK(id.beta == 5.0);
}

TEST_CASE("property: clarke is linear") {
  auto g = test::rng(11);
  for (int i = 0; i < kPropertyCases; ++i) {
    const AbcVector v{uniform(g, -100, 100), uniform(g, -100, 100), uniform(g, -100, 100)};
    const AbcVector w{uniform(g, -100, 100), uniform(g, -100, 100), uniform(g, -100, 100)};
    const double l = uniform(g, -10, 10);
    const AlphaBetaVector lhs = clarke(AbcVector::from(l * v.vec() + w.vec()));
    const Eigen::Vector2d rhs = l * clarke(v).vec() + clarke(w).vec();
    REQUIRE((lhs.vec() - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("property: clarke after clarke_pinv is the identity") {
  auto g = test::rng(12);
  for (int i = 0; i < kPropertyCases; ++i) {
    const AlphaBetaVector v{uniform(g, -1e3, 1e3), uniform(g, -1e3, 1e3)};
    const AlphaBetaVector r = clarke(clarke_pinv(v));
    REQUIRE((r.vec() - v.vec()).norm() <= 1e-12 * v.vec().norm());
  }
}

TEST_CASE("property: park is an isometry with park_inv as inverse") {
  auto g = test::rng(13);
  for (int i = 0; i < kPropertyCases; ++i) {
    const AlphaBetaVector v{uniform(g, -1e3, 1e3), uniform(g, -1e3, 1e3)};
    const double theta = uniform(g, -20.0, 20.0);
    const DqVector d = park(v, theta);
    REQUIRE(std::abs(d.vec().norm() - v.vec().norm()) <= 1e-12 * v.vec().norm());
    const AlphaBetaVector back = park_inv(d, theta);
    REQUIRE((back.vec() - v.vec()).norm() <= 1e-12 * v.vec().norm());
    const DqVector dq{uniform(g, -50, 50), uniform(g, -50, 50)};
    REQUIRE(std::abs(park_inv(dq, theta).vec().norm() - dq.vec().norm()) <=
            1e-12 * dq.vec().norm());
  }
}

TEST_CASE("property: common mode is rejected") {
  auto g = test::rng(14);
  for (int i = 0; i < kPropertyCases; ++i) {
    const double c = uniform(g, -1e4, 1e4);
    const AlphaBetaVector r = clarke({c, c, c});
    REQUIRE(std::abs(r.alpha) <= 1e-12 * std::abs(c));
    REQUIRE(std::abs(r.beta) <= 1e-12 * std::abs(c));
  }
}
