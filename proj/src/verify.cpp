#include "smpc/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace smpc {

namespace {

SwitchState random_switch(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> level(-1, 1);
  return SwitchState(level(rng), level(rng), level(rng));
}

std::string describe(const SwitchSequence& u) {
  std::string s;
  for (int i = 0; i < u.size(); ++i) s += (u[i] < 0 ? '-' : u[i] == 0 ? '0' : '+');
  return s;
}

}  // namespace

RandomInstance random_instance(std::mt19937_64& rng, int n_h, double lambda) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const PlantParams params;
  RandomInstance inst;
  PlantState& st = inst.state;
  st.t = uniform(0.0, 0.02);
  st.i_m = {uniform(-30.0, 30.0), uniform(-30.0, 30.0)};
  st.i_n = {uniform(-30.0, 30.0), uniform(-30.0, 30.0)};
  st.dc = {uniform(650.0, 750.0), uniform(-5.0, 5.0), params.capacitance};
  st.mech.omega_m = uniform(0.0, 150.0);
  st.mech.omega_e = params.machine.pole_pairs * st.mech.omega_m;
  st.mech.theta_e = uniform(0.0, 2.0 * std::numbers::pi);

  inst.refs.i_dq_ref = {0.0, uniform(-30.0, 30.0)};
  inst.refs.p_ref = uniform(-8000.0, 8000.0);
  inst.refs.q_ref = 0.0;
  inst.u_prev_m = random_switch(rng);
  inst.u_prev_n = random_switch(rng);

  ControllerConfig cfg;
  cfg.n_h = n_h;
  cfg.lambda = lambda;
  inst.models = build_step_models(st, params, cfg, inst.refs, inst.u_prev_m, inst.u_prev_n);
  return inst;
}

VerifyReport run_verification(std::uint64_t seed, int cases, double cost_tolerance) {
  VerifyReport report;
  report.cases = cases;
  std::mt19937_64 rng(seed);

  for (int c = 0; c < cases; ++c) {
    for (int n_h : {1, 2}) {
      const RandomInstance inst = random_instance(rng, n_h);
      const QpForm* qps[] = {&inst.models.machine_qp, &inst.models.grid_qp};
      for (const QpForm* qp : qps) {
        const CandidateList oracle = brute_force_kbest(*qp, 10);
        for (int k : {1, 4, 10}) {
          ++report.kbest_checks;
          const CandidateList got = k_best(*qp, k);
          bool same = got.items.size() == static_cast<std::size_t>(k);
          for (std::size_t i = 0; same && i < got.items.size(); ++i) {
            same = got.items[i].u == oracle.items[i].u &&
                   std::abs(got.items[i].cost - oracle.items[i].cost) <= cost_tolerance;
          }
          if (!same) {
            ++report.kbest_failures;
            std::ostringstream msg;
            msg << "case " << c << " N_h=" << n_h << " k=" << k << ": k_best "
                << (got.items.empty() ? "<none>" : describe(got.items[0].u)) << " oracle "
                << describe(oracle.items[0].u);
            report.messages.push_back(msg.str());
          }
        }
      }

      // Condensation: raw objective and decoder metric share the minimiser.
      const MultistepModel* ms[] = {&inst.models.machine_multistep, &inst.models.grid_multistep};
      const Eigen::VectorXd x0s[] = {inst.state.i_m.vec(), inst.state.i_n.vec()};
      const Eigen::VectorXd refs[] = {stack_machine_reference(inst.refs, n_h),
                                      stack_grid_reference(inst.refs, n_h)};
      const SwitchState prev[] = {inst.u_prev_m, inst.u_prev_n};
      for (int side = 0; side < 2; ++side) {
        ++report.condensation_checks;
        const auto raw = brute_force_kbest(
            [&](const SwitchSequence& u) {
              return raw_cost(*ms[side], x0s[side], refs[side], prev[side], 0.1, u);
            },
            1, n_h);
        const auto condensed = brute_force_kbest(*qps[side], 1);
        if (raw.items[0].u != condensed.items[0].u) {
          ++report.condensation_failures;
          report.messages.push_back("case " + std::to_string(c) + " N_h=" + std::to_string(n_h) +
                                    ": condensed minimiser differs from raw minimiser");
        }
      }
    }
  }
  return report;
}

}  // namespace smpc
