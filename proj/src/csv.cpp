#include "smpc/csv.hpp"

#include <cstdio>

namespace smpc {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_timeseries_csv(std::ostream& out, const TimeSeries& ts) {
  out << "t,i_d,i_q,i_alpha,i_beta,i_ma,i_mb,i_mc,v_dc,v_o,omega_m,omega_e,theta_e,"
         "t_e,t_e_ref,i_q_ref,p,q,p_ref,q_ref,v_dc_ref,speed_ref,"
         "s_ma,s_mb,s_mc,s_na,s_nb,s_nc,j_m,j_n,j_o,nodes_m,nodes_n\n";
  for (const StepRecord& r : ts.records) {
    for (double v : {r.t, r.i_d, r.i_q, r.i_alpha, r.i_beta, r.i_ma, r.i_mb, r.i_mc, r.v_dc,
                     r.v_o, r.omega_m, r.omega_e, r.theta_e, r.t_e, r.t_e_ref, r.i_q_ref, r.p,
                     r.q, r.p_ref, r.q_ref, r.v_dc_ref, r.speed_ref}) {
      out << format_number(v) << ',';
    }
    for (const SwitchState* s : {&r.s_m, &r.s_n}) {
      for (auto level : s->s) out << int(level) << ',';
    }
    out << format_number(r.j_m) << ',' << format_number(r.j_n) << ',' << format_number(r.j_o)
        << ',' << r.nodes_m << ',' << r.nodes_n << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n_h,n_k,n_l,lambda,mode,status,thd_machine,rmse_te,rmse_q,rmse_p,rmse_vo,rmse_vdc,"
         "f_sw_machine,f_sw_grid,avg_nodes,error\n";
  for (const SweepRow& row : rows) {
    const ControllerConfig& c = row.controller;
    out << c.n_h << ',' << c.n_k << ',' << c.n_l << ',' << format_number(c.lambda) << ','
        << to_string(c.mode) << ',' << (row.ok ? "ok" : "failed") << ',';
    const RunMetrics& m = row.metrics;
    for (double v : {m.thd_machine, m.rmse_te, m.rmse_q, m.rmse_p, m.rmse_vo, m.rmse_vdc,
                     m.f_sw_machine, m.f_sw_grid, m.avg_nodes}) {
      out << (row.ok ? format_number(v) : std::string()) << ',';
    }
    std::string err = row.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    }
    out << err << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumBin>& bins) {
  out << "frequency_hz,magnitude\n";
  for (const SpectrumBin& b : bins) {
    out << format_number(b.frequency) << ',' << format_number(b.magnitude) << '\n';
  }
}

}  // namespace smpc
