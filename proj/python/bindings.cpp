#include <random>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smpc/config.hpp"
#include "smpc/errors.hpp"
#include "smpc/metrics.hpp"
#include "smpc/plant.hpp"
#include "smpc/scenario.hpp"
#include "smpc/solver.hpp"
#include "smpc/transforms.hpp"
#include "smpc/verify.hpp"

namespace py = pybind11;
using namespace smpc;

namespace {

std::vector<int> levels_of(const SwitchSequence& u) {
  return {u.levels().begin(), u.levels().end()};
}

py::list candidates(const CandidateList& list) {
  py::list out;
  for (const Candidate& c : list.items) out.append(py::make_tuple(levels_of(c.u), c.cost));
  return out;
}

py::dict kbest_result(const CandidateList& list) {
  py::dict d;
  d["candidates"] = candidates(list);
  d["nodes"] = list.nodes_visited;
  return d;
}

PlantState state_from(const py::dict& d, const PlantParams& params) {
  PlantState st;
  auto get = [&](const char* key, double fallback) {
    return d.contains(key) ? d[key].cast<double>() : fallback;
  };
  st.i_m = {get("i_d", 0.0), get("i_q", 0.0)};
  st.i_n = {get("i_alpha", 0.0), get("i_beta", 0.0)};
  st.dc = {get("v_dc", 700.0), get("v_o", 0.0), params.capacitance};
  st.mech.omega_m = get("omega_m", 0.0);
  st.mech.omega_e = get("omega_e", params.machine.pole_pairs * st.mech.omega_m);
  st.mech.theta_e = get("theta_e", 0.0);
  st.mech.inertia_j = get("inertia", 0.05);
  st.mech.t_m = get("t_m", 0.0);
  st.t = get("t", 0.0);
  return st;
}

py::dict state_to(const PlantState& st) {
  py::dict d;
  d["i_d"] = st.i_m.d;
  d["i_q"] = st.i_m.q;
  d["i_alpha"] = st.i_n.alpha;
  d["i_beta"] = st.i_n.beta;
  d["v_dc"] = st.dc.v_dc;
  d["v_o"] = st.dc.v_o;
  d["omega_m"] = st.mech.omega_m;
  d["omega_e"] = st.mech.omega_e;
  d["theta_e"] = st.mech.theta_e;
  d["inertia"] = st.mech.inertia_j;
  d["t_m"] = st.mech.t_m;
  d["t"] = st.t;
  return d;
}

py::dict series_to(const TimeSeries& ts) {
  const auto n = static_cast<py::ssize_t>(ts.records.size());
  py::dict out;
  auto column = [&](const char* name, auto field) {
    py::array_t<double> a(n);
    auto w = a.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) w(i) = static_cast<double>(field(ts.records[static_cast<std::size_t>(i)]));
    out[name] = a;
  };
#define SMPC_COLUMN(f) column(#f, [](const StepRecord& r) { return r.f; })
  SMPC_COLUMN(t); SMPC_COLUMN(i_d); SMPC_COLUMN(i_q); SMPC_COLUMN(i_alpha); SMPC_COLUMN(i_beta);
  SMPC_COLUMN(i_ma); SMPC_COLUMN(i_mb); SMPC_COLUMN(i_mc); SMPC_COLUMN(v_dc); SMPC_COLUMN(v_o);
  SMPC_COLUMN(omega_m); SMPC_COLUMN(omega_e); SMPC_COLUMN(theta_e); SMPC_COLUMN(t_e);
  SMPC_COLUMN(t_e_ref); SMPC_COLUMN(i_q_ref); SMPC_COLUMN(p); SMPC_COLUMN(q); SMPC_COLUMN(p_ref);
  SMPC_COLUMN(q_ref); SMPC_COLUMN(v_dc_ref); SMPC_COLUMN(speed_ref); SMPC_COLUMN(j_m);
  SMPC_COLUMN(j_n); SMPC_COLUMN(j_o); SMPC_COLUMN(nodes_m); SMPC_COLUMN(nodes_n);
#undef SMPC_COLUMN
  py::array_t<std::int8_t> s_m({n, py::ssize_t{3}}), s_n({n, py::ssize_t{3}});
  auto wm = s_m.mutable_unchecked<2>();
  auto wn = s_n.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t j = 0; j < 3; ++j) {
      wm(i, j) = ts.records[static_cast<std::size_t>(i)].s_m.s[static_cast<std::size_t>(j)];
      wn(i, j) = ts.records[static_cast<std::size_t>(i)].s_n.s[static_cast<std::size_t>(j)];
    }
  }
  out["s_m"] = s_m;
  out["s_n"] = s_n;
  out["t_s"] = ts.t_s;
  return out;
}

TimeSeries series_from(const py::dict& d) {
  TimeSeries ts;
  ts.t_s = d["t_s"].cast<double>();
  auto col = [&](const char* name) { return d[name].cast<std::vector<double>>(); };
  const auto t = col("t"), i_ma = col("i_ma"), omega_e = col("omega_e"), t_e = col("t_e"),
             t_e_ref = col("t_e_ref"), p = col("p"), q = col("q"), p_ref = col("p_ref"),
             q_ref = col("q_ref"), v_o = col("v_o"), v_dc = col("v_dc"), v_dc_ref = col("v_dc_ref"),
             nodes_m = col("nodes_m"), nodes_n = col("nodes_n");
  using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;
  const IntArray sm = IntArray::ensure(d["s_m"]);
  const IntArray sn = IntArray::ensure(d["s_n"]);
  if (!sm || !sn || sm.ndim() != 2 || sn.ndim() != 2 || sm.shape(0) != static_cast<py::ssize_t>(t.size()) ||
      sn.shape(0) != sm.shape(0) || sm.shape(1) != 3 || sn.shape(1) != 3) {
    throw ConfigError("s_m and s_n must be N x 3 integer arrays");
  }
  const auto s_m = sm.unchecked<2>();
  const auto s_n = sn.unchecked<2>();
  for (std::size_t i = 0; i < t.size(); ++i) {
    StepRecord r;
    r.t = t[i];
    r.i_ma = i_ma[i];
    r.omega_e = omega_e[i];
    r.t_e = t_e[i];
    r.t_e_ref = t_e_ref[i];
    r.p = p[i];
    r.q = q[i];
    r.p_ref = p_ref[i];
    r.q_ref = q_ref[i];
    r.v_o = v_o[i];
    r.v_dc = v_dc[i];
    r.v_dc_ref = v_dc_ref[i];
    r.nodes_m = static_cast<std::int64_t>(nodes_m[i]);
    r.nodes_n = static_cast<std::int64_t>(nodes_n[i]);
    const auto k = static_cast<py::ssize_t>(i);
    r.s_m = SwitchState(s_m(k, 0), s_m(k, 1), s_m(k, 2));
    r.s_n = SwitchState(s_n(k, 0), s_n(k, 1), s_n(k, 2));
    ts.records.push_back(r);
  }
  return ts;
}

py::dict metrics_to(const RunMetrics& m) {
  py::dict d;
  d["thd_machine"] = m.thd_machine;
  d["rmse_te"] = m.rmse_te;
  d["rmse_q"] = m.rmse_q;
  d["rmse_p"] = m.rmse_p;
  d["rmse_vo"] = m.rmse_vo;
  d["rmse_vdc"] = m.rmse_vdc;
  d["f_sw_machine"] = m.f_sw_machine;
  d["f_sw_grid"] = m.f_sw_grid;
  d["avg_nodes"] = m.avg_nodes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sequential sphere-decoding MPC core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<SimulationError>(m, "SimulationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  m.def("clarke", [](const Eigen::Vector3d& v) { return clarke(AbcVector::from(v)).vec(); },
        py::arg("abc"));
  m.def("clarke_pinv", [](const Eigen::Vector2d& v) { return clarke_pinv(AlphaBetaVector::from(v)).vec(); },
        py::arg("alpha_beta"));
  m.def("park",
        [](const Eigen::Vector2d& v, double theta) { return park(AlphaBetaVector::from(v), theta).vec(); },
        py::arg("alpha_beta"), py::arg("theta"));
  m.def("park_inv",
        [](const Eigen::Vector2d& v, double theta) { return park_inv(DqVector::from(v), theta).vec(); },
        py::arg("dq"), py::arg("theta"));

  py::class_<SwitchState>(m, "SwitchState")
      .def(py::init<>())
      .def(py::init<int, int, int>(), py::arg("a"), py::arg("b"), py::arg("c"))
      .def_property_readonly("levels", [](const SwitchState& s) {
        return std::vector<int>{s.s[0], s.s[1], s.s[2]};
      })
      .def(py::self == py::self)
      .def("__repr__", [](const SwitchState& s) {
        return "SwitchState(" + std::to_string(s.s[0]) + ", " + std::to_string(s.s[1]) + ", " +
               std::to_string(s.s[2]) + ")";
      });

  m.def(
      "plant_step",
      [](const py::dict& state, const SwitchState& s_m, const SwitchState& s_n, double dt, int substeps) {
        const PlantParams params;
        return state_to(plant_step(state_from(state, params), s_m, s_n, dt, substeps, params));
      },
      py::arg("state"), py::arg("s_m"), py::arg("s_n"), py::arg("dt") = 50e-6, py::arg("substeps") = 10,
      "Advance the default plant by dt with both switch states held. `state` is a dict "
      "with any of i_d, i_q, i_alpha, i_beta, v_dc, v_o, omega_m, omega_e, theta_e, inertia, t_m, t.");

  py::class_<QpForm>(m, "QpForm")
      .def_readonly("q", &QpForm::q)
      .def_readonly("theta", &QpForm::theta)
      .def_readonly("h_factor", &QpForm::h_factor)
      .def_readonly("u_unc", &QpForm::u_unc)
      .def_readonly("u_check", &QpForm::u_check)
      .def_readonly("lambda_", &QpForm::lambda)
      .def_property_readonly("horizon", &QpForm::horizon)
      .def("cost", [](const QpForm& qp, const std::vector<int>& u) {
        return qp_cost(qp, SwitchSequence(std::vector<std::int8_t>(u.begin(), u.end())));
      });

  m.def(
      "random_qp",
      [](std::uint64_t seed, int n_h, const std::string& side, double lambda) {
        std::mt19937_64 rng(seed);
        const RandomInstance inst = random_instance(rng, n_h, lambda);
        if (side == "machine") return inst.models.machine_qp;
        if (side == "grid") return inst.models.grid_qp;
        throw ConfigError("side must be 'machine' or 'grid'");
      },
      py::arg("seed"), py::arg("n_h"), py::arg("side") = "machine", py::arg("lambda_") = 0.1,
      "Subproblem of a random controller situation with the default plant.");

  m.def("k_best", [](const QpForm& qp, int k) { return kbest_result(k_best(qp, k)); }, py::arg("qp"),
        py::arg("k"), "The k lowest-cost switch sequences by repeated sphere decoding.");
  m.def("brute_force_kbest", [](const QpForm& qp, int k) { return kbest_result(brute_force_kbest(qp, k)); },
        py::arg("qp"), py::arg("k"), "Exhaustive enumeration of all 3^(3 N_h) sequences.");

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("duration", &ScenarioConfig::duration)
      .def_readwrite("substeps", &ScenarioConfig::substeps)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("sensor_noise", &ScenarioConfig::sensor_noise)
      .def_readwrite("speed_gain", &ScenarioConfig::speed_gain)
      .def_readwrite("v_dc_ref", &ScenarioConfig::v_dc_ref)
      .def_property(
          "horizon", [](const ScenarioConfig& c) { return c.controller.n_h; },
          [](ScenarioConfig& c, int v) { c.controller.n_h = v; })
      .def_property(
          "n_k", [](const ScenarioConfig& c) { return c.controller.n_k; },
          [](ScenarioConfig& c, int v) { c.controller.n_k = v; })
      .def_property(
          "n_l", [](const ScenarioConfig& c) { return c.controller.n_l; },
          [](ScenarioConfig& c, int v) { c.controller.n_l = v; })
      .def_property(
          "lambda_", [](const ScenarioConfig& c) { return c.controller.lambda; },
          [](ScenarioConfig& c, double v) { c.controller.lambda = v; })
      .def_property(
          "mode", [](const ScenarioConfig& c) { return to_string(c.controller.mode); },
          [](ScenarioConfig& c, const std::string& v) { c.controller.mode = parse_mode(v); })
      .def_property(
          "speed_rpm", [](const ScenarioConfig& c) { return format_profile(c.speed_rpm); },
          [](ScenarioConfig& c, const std::string& v) { c.speed_rpm = parse_profile(v); })
      .def_property(
          "load_torque", [](const ScenarioConfig& c) { return format_profile(c.load_torque); },
          [](ScenarioConfig& c, const std::string& v) { c.load_torque = parse_profile(v); })
      .def("validate", &ScenarioConfig::validate);

  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "run_scenario",
      [](const ScenarioConfig& cfg) {
        TimeSeries ts;
        {
          py::gil_scoped_release release;
          ts = run_scenario(cfg);
        }
        return series_to(ts);
      },
      py::arg("config"), "Closed-loop run; returns a dict of per-step numpy columns.");
  m.def("compute_metrics", [](const py::dict& series) { return metrics_to(compute_metrics(series_from(series))); },
        py::arg("series"));
  m.def(
      "compute_thd",
      [](const std::vector<double>& signal, double f1, int periods, double t_s) {
        return compute_thd(signal, f1, periods, t_s);
      },
      py::arg("signal"), py::arg("fundamental_hz"), py::arg("periods"), py::arg("sample_period"));

  m.def(
      "run_verification",
      [](std::uint64_t seed, int cases) {
        const VerifyReport r = run_verification(seed, cases);
        py::dict d;
        d["ok"] = r.ok();
        d["kbest_checks"] = r.kbest_checks;
        d["kbest_failures"] = r.kbest_failures;
        d["condensation_checks"] = r.condensation_checks;
        d["condensation_failures"] = r.condensation_failures;
        d["messages"] = r.messages;
        return d;
      },
      py::arg("seed") = 1, py::arg("cases") = 20);
}
