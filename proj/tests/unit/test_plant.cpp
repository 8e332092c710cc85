#include <cmath>
#include <numbers>

#include <doctest.h>

#include "smpc/errors.hpp"
#include "smpc/plant.hpp"
#include "support.hpp"

using namespace smpc;
using smpc::test::kPropertyCases;
using smpc::test::uniform;

namespace {

Eigen::Matrix<double, 7, 1> flatten(const PlantState& s) {
  Eigen::Matrix<double, 7, 1> v;
  v << s.i_m.d, s.i_m.q, s.i_n.alpha, s.i_n.beta, s.dc.v_dc, s.dc.v_o, s.mech.omega_m;
  return v;
}

PlantState random_state(std::mt19937_64& g) {
  PlantState s;
  s.i_m = {uniform(g, -20, 20), uniform(g, -40, 40)};
  s.i_n = {uniform(g, -30, 30), uniform(g, -30, 30)};
  s.dc.v_dc = uniform(g, 650, 750);
  s.dc.v_o = uniform(g, -5, 5);
  s.mech.omega_m = uniform(g, 0, 120);
  s.mech.omega_e = 3 * s.mech.omega_m;
  s.mech.theta_e = uniform(g, 0, 2 * std::numbers::pi);
  s.mech.t_m = uniform(g, 0, 40);
  s.t = uniform(g, 0, 0.02);
  return s;
}

}  // namespace

TEST_CASE("switch state validation") {
  CHECK_NOTHROW(SwitchState(1, 0, -1));
  CHECK_THROWS_AS(SwitchState(2, 0, 0), Error);
  CHECK_THROWS_AS(SwitchState(0, -2, 0), Error);
}

TEST_CASE("converter_voltage examples") {
  DcLinkState dc;
  dc.v_dc = 700.0;
  dc.v_o = 0.0;
  const AbcVector zero = converter_voltage(SwitchState(0, 0, 0), dc);
  CHECK(zero.vec().norm() == 0.0);

  // (700/6) * (3, -3, 0)
  const AbcVector u = converter_voltage(SwitchState(1, -1, 0), dc);
  CHECK(u.a == doctest::Approx(350.0).epsilon(1e-12));
  CHECK(u.b == doctest::Approx(-350.0).epsilon(1e-12));
  CHECK(std::abs(u.c) < 1e-12);

  dc.v_o = 13.0;
  CHECK(converter_voltage(SwitchState(1, 1, 1), dc).vec().norm() < 1e-12);
}

TEST_CASE("dc_link_derivative examples") {
  const SwitchState zero(0, 0, 0);
  const DcLinkRate r0 = dc_link_derivative(zero, zero, {1, 2, 3}, {4, 5, 6}, 1100e-6);
  CHECK(r0.dv_dc == 0.0);
  CHECK(r0.dv_o == 0.0);

  // 10 / 0.0011
  const DcLinkRate r1 = dc_link_derivative(SwitchState(1, 0, 0), zero, {10, 0, 0}, {}, 1100e-6);
  CHECK(r1.dv_dc == doctest::Approx(9090.909090909091).epsilon(1e-12));
  CHECK(r1.dv_o == doctest::Approx(9090.909090909091).epsilon(1e-12));

  const DcLinkRate r2 = dc_link_derivative(SwitchState(-1, 0, 0), zero, {10, 0, 0}, {}, 1100e-6);
  CHECK(r2.dv_dc == doctest::Approx(-9090.909090909091).epsilon(1e-12));
  CHECK(r2.dv_o == doctest::Approx(9090.909090909091).epsilon(1e-12));
}

TEST_CASE("machine_derivative examples") {
  MachineParams p;
  const DqVector zero = machine_derivative({}, {}, 0.0, p);
  CHECK(zero.d == 0.0);
  CHECK(zero.q == 0.0);

  const DqVector gu = machine_derivative({}, {1.0, 0.0}, 0.0, p);
  CHECK(gu.d == doctest::Approx(52.631578947368421).epsilon(1e-12));
  CHECK(gu.q == 0.0);

  // psi * omega / L = 0.42675 * 100 / 0.019
  const DqVector emf = machine_derivative({}, {}, 100.0, p);
  CHECK(emf.d == 0.0);
  CHECK(emf.q == doctest::Approx(-2246.0526315789474).epsilon(1e-12));
}

TEST_CASE("grid_derivative examples") {
  GridParams p;
  const AlphaBetaVector zero = grid_derivative({}, {}, {}, p);
  CHECK(zero.vec().norm() == 0.0);

  const AlphaBetaVector decay = grid_derivative({1.0, 0.0}, {}, {}, p);
  CHECK(decay.alpha == doctest::Approx(-7.8).epsilon(1e-12));
  CHECK(decay.beta == 0.0);

  const AlphaBetaVector cancel = grid_derivative({}, {10.0, 0.0}, {10.0, 0.0}, p);
  CHECK(cancel.vec().norm() == 0.0);
}

TEST_CASE("grid_emf examples") {
  GridParams p;
  const AlphaBetaVector e0 = grid_emf(0.0, p);
  CHECK(e0.alpha == doctest::Approx(306.18621784789726).epsilon(1e-12));
  CHECK(std::abs(e0.beta) < 1e-12);

  const double period = 2 * std::numbers::pi / p.omega_n;
  CHECK(period == doctest::Approx(0.02).epsilon(1e-15));
  auto g = test::rng(21);
  for (int i = 0; i < kPropertyCases; ++i) {
    const double t = uniform(g, 0.0, 1.0);
    REQUIRE(grid_emf(t, p).vec().norm() == doctest::Approx(306.18621784789726).epsilon(1e-12));
    REQUIRE((grid_emf(t + period, p).vec() - grid_emf(t, p).vec()).norm() < 1e-9);
  }
}

TEST_CASE("power_output examples") {
  const PowerOutput z = power_output({}, {100.0, 0.0});
  CHECK(z.p == 0.0);
  CHECK(z.q == 0.0);
  const PowerOutput a = power_output({2.0, 0.0}, {100.0, 0.0});
  CHECK(a.p == 200.0);
  CHECK(a.q == 0.0);
  const PowerOutput b = power_output({0.0, 2.0}, {100.0, 0.0});
  CHECK(b.p == 0.0);
  CHECK(b.q == -200.0);
}

TEST_CASE("electromagnetic_torque and mech_step") {
  MachineParams p;
  CHECK(electromagnetic_torque(10.0, p) == doctest::Approx(19.20375).epsilon(1e-12));
  CHECK(electromagnetic_torque(0.0, p) == 0.0);

  MechState m;
  m.omega_m = 50.0;
  m.t_m = 12.0;
  const MechState balanced = mech_step(m, 12.0, 1e-3, 3);
  CHECK(balanced.omega_m == 50.0);
  CHECK(balanced.omega_e == 150.0);

  MechState n;
  n.inertia_j = 0.1;
  n.t_m = 10.0;
  const MechState accel = mech_step(n, 0.0, 0.001, 3);
  CHECK(accel.omega_m - n.omega_m == doctest::Approx(0.1).epsilon(1e-12));

  MechState w;
  w.omega_m = 377.0;
  w.t_m = 0.0;
  for (int i = 0; i < 1'000'000; ++i) w = mech_step(w, 0.0, 5e-6, 3);
  CHECK(w.theta_e >= 0.0);
  CHECK(w.theta_e < 2 * std::numbers::pi);
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(-0.5) == doctest::Approx(2 * std::numbers::pi - 0.5));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - 2 * std::numbers::pi));
}

TEST_CASE("plant_step fixed point") {
  PlantParams params;
  params.grid.e_peak = 0.0;
  PlantState s;
  const SwitchState zero(0, 0, 0);
  const PlantState next = plant_step(s, zero, zero, 50e-6, 10, params);
  CHECK(flatten(next) == flatten(s));
  CHECK(next.mech.theta_e == s.mech.theta_e);
  CHECK(next.t == doctest::Approx(50e-6));
}

TEST_CASE("plant_step with one substep is one Euler step") {
  PlantParams params;
  auto g = test::rng(22);
  for (int i = 0; i < 100; ++i) {
    const PlantState s = random_state(g);
    const SwitchState sm = test::random_switch(g);
    const SwitchState sn = test::random_switch(g);
    const double dt = 50e-6;

    const AbcVector um = converter_voltage(sm, s.dc);
    const AbcVector un = converter_voltage(sn, s.dc);
    const DqVector dim =
        machine_derivative(s.i_m, park(clarke(um), s.mech.theta_e), s.mech.omega_e, params.machine);
    const AlphaBetaVector din =
        grid_derivative(s.i_n, clarke(un), grid_emf(s.t, params.grid), params.grid);
    const DcLinkRate ddc = dc_link_derivative(sm, sn, clarke_pinv(park_inv(s.i_m, s.mech.theta_e)),
                                              clarke_pinv(s.i_n), s.dc.c);
    const double te = electromagnetic_torque(s.i_m.q, params.machine);

    const PlantState n = plant_step(s, sm, sn, dt, 1, params);
    REQUIRE(n.i_m.d == s.i_m.d + dt * dim.d);
    REQUIRE(n.i_m.q == s.i_m.q + dt * dim.q);
    REQUIRE(n.i_n.alpha == s.i_n.alpha + dt * din.alpha);
    REQUIRE(n.i_n.beta == s.i_n.beta + dt * din.beta);
    REQUIRE(n.dc.v_dc == s.dc.v_dc + dt * ddc.dv_dc);
    REQUIRE(n.dc.v_o == s.dc.v_o + dt * ddc.dv_o);
    REQUIRE(n.mech.omega_m == s.mech.omega_m + dt * (s.mech.t_m - te) / s.mech.inertia_j);
  }
}

TEST_CASE("plant_step substep refinement converges at second order per period") {
  // The gap between one and two substeps over an interval dt shrinks like dt^2.
  PlantParams params;
  auto g = test::rng(23);
  for (int i = 0; i < 20; ++i) {
    const PlantState s = random_state(g);
    const SwitchState sm = test::random_switch(g);
    const SwitchState sn = test::random_switch(g);
    auto gap = [&](double dt) {
      return (flatten(plant_step(s, sm, sn, dt, 1, params)) -
              flatten(plant_step(s, sm, sn, dt, 2, params)))
          .norm();
    };
    const double ratio = gap(50e-6) / gap(25e-6);
    REQUIRE(ratio == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("plant_step error paths") {
  PlantParams params;
  PlantState s;
  const SwitchState zero(0, 0, 0);
  CHECK_THROWS_AS(plant_step(s, zero, zero, 0.0, 10, params), Error);
  CHECK_THROWS_AS(plant_step(s, zero, zero, 1e-5, 0, params), Error);
  s.i_m.d = std::nan("");
  CHECK_THROWS_AS(plant_step(s, zero, zero, 1e-5, 1, params), SimulationError);
  PlantState huge;
  huge.i_n.alpha = 1e308;
  CHECK_THROWS_AS(plant_step(huge, zero, SwitchState(1, 1, -1), 1e-2, 1, params), SimulationError);
}

TEST_CASE("property: converter voltages sum to zero") {
  auto g = test::rng(24);
  for (int i = 0; i < kPropertyCases; ++i) {
    DcLinkState dc;
    dc.v_dc = uniform(g, 0, 1000);
    dc.v_o = uniform(g, -50, 50);
    const AbcVector u = converter_voltage(test::random_switch(g), dc);
    REQUIRE(std::abs(u.a + u.b + u.c) <= 1e-12 * (1.0 + dc.v_dc));
  }
}

TEST_CASE("property: dc_link_derivative is bilinear") {
  auto g = test::rng(25);
  auto rand_abc = [&] { return AbcVector{uniform(g, -50, 50), uniform(g, -50, 50), uniform(g, -50, 50)}; };
  for (int i = 0; i < kPropertyCases; ++i) {
    const SwitchState sm = test::random_switch(g);
    const SwitchState sn = test::random_switch(g);
    const AbcVector a = rand_abc(), b = rand_abc(), c = rand_abc(), d = rand_abc();
    const double k = uniform(g, -3, 3);
    const DcLinkRate lhs = dc_link_derivative(sm, sn, AbcVector::from(k * a.vec() + b.vec()),
                                              AbcVector::from(k * c.vec() + d.vec()), 1e-3);
    const DcLinkRate r1 = dc_link_derivative(sm, sn, a, c, 1e-3);
    const DcLinkRate r2 = dc_link_derivative(sm, sn, b, d, 1e-3);
    REQUIRE(lhs.dv_dc == doctest::Approx(k * r1.dv_dc + r2.dv_dc).epsilon(1e-9).scale(1e4));
    REQUIRE(lhs.dv_o == doctest::Approx(k * r1.dv_o + r2.dv_o).epsilon(1e-9).scale(1e4));
    // The other factor: negating the switch vector negates dv_dc.
    const SwitchState nm(-sm.s[0], -sm.s[1], -sm.s[2]);
    const SwitchState nn(-sn.s[0], -sn.s[1], -sn.s[2]);
    REQUIRE(dc_link_derivative(nm, nn, a, c, 1e-3).dv_dc == doctest::Approx(-r1.dv_dc));
  }
}

TEST_CASE("property: positive machine injection with idle grid charges the link") {
  auto g = test::rng(26);
  int checked = 0;
  while (checked < kPropertyCases) {
    const SwitchState sm = test::random_switch(g);
    const AbcVector im{uniform(g, -30, 30), uniform(g, -30, 30), uniform(g, -30, 30)};
    if (!(sm.vec().dot(im.vec()) > 0.0)) continue;
    ++checked;
    REQUIRE(dc_link_derivative(sm, SwitchState(0, 0, 0), im, {}, 1100e-6).dv_dc > 0.0);
  }
}

TEST_CASE("property: unforced currents decay monotonically") {
  PlantParams params;
  params.grid.e_peak = 0.0;
  auto g = test::rng(27);
  const SwitchState zero(0, 0, 0);
  for (int i = 0; i < kPropertyCases; ++i) {
    PlantState s;
    s.i_m = {uniform(g, -50, 50), uniform(g, -50, 50)};
    s.i_n = {uniform(g, -50, 50), uniform(g, -50, 50)};
    double nm = s.i_m.vec().norm();
    double nn = s.i_n.vec().norm();
    for (int k = 0; k < 5; ++k) {
      s = plant_step(s, zero, zero, 50e-6, 2, params);
      REQUIRE(s.i_m.vec().norm() < nm);
      REQUIRE(s.i_n.vec().norm() < nn);
      nm = s.i_m.vec().norm();
      nn = s.i_n.vec().norm();
    }
  }
}
