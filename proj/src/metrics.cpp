#include "smpc/metrics.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "smpc/errors.hpp"

namespace smpc {

namespace {

std::size_t window_length(std::span<const double> signal, double fundamental_hz,
                          int window_periods, double sample_period) {
  if (!(fundamental_hz > 0.0) || window_periods < 1 || !(sample_period > 0.0)) {
    throw Error("harmonic analysis: fundamental, window and sample period must be positive");
  }
  const auto n = static_cast<std::size_t>(
      std::llround(window_periods / (fundamental_hz * sample_period)));
  if (n < 2 || n > signal.size()) {
    throw Error("harmonic analysis: signal shorter than the requested window");
  }
  return n;
}

// DFT of x evaluated at an arbitrary frequency.
std::complex<double> dft_at(std::span<const double> x, double freq, double sample_period) {
  std::complex<double> acc{0.0, 0.0};
  const double w = -2.0 * std::numbers::pi * freq * sample_period;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * std::polar(1.0, w * static_cast<double>(i));
  }
  return acc;
}

}  // namespace

double compute_thd(std::span<const double> signal, double fundamental_hz, int window_periods,
                   double sample_period) {
  const std::size_t n = window_length(signal, fundamental_hz, window_periods, sample_period);
  const auto window = signal.last(n);

  const double fundamental = std::abs(dft_at(window, fundamental_hz, sample_period));
  if (!(fundamental > 0.0)) throw Error("compute_thd: zero fundamental magnitude");

  const double nyquist = 0.5 / sample_period;
  double harmonic_energy = 0.0;
  for (int h = 2; h * fundamental_hz < nyquist; ++h) {
    harmonic_energy += std::norm(dft_at(window, h * fundamental_hz, sample_period));
  }
  return std::sqrt(harmonic_energy) / fundamental;
}

std::vector<SpectrumBin> compute_spectrum(std::span<const double> signal, double fundamental_hz,
                                          int window_periods, double sample_period) {
  const std::size_t n = window_length(signal, fundamental_hz, window_periods, sample_period);
  const auto window = signal.last(n);
  const double resolution = 1.0 / (static_cast<double>(n) * sample_period);
  std::vector<SpectrumBin> bins;
  bins.reserve(n / 2 + 1);
  for (std::size_t m = 0; m <= n / 2; ++m) {
    const double f = static_cast<double>(m) * resolution;
    const double scale = (m == 0 || 2 * m == n) ? 1.0 : 2.0;
    bins.push_back({f, scale * std::abs(dft_at(window, f, sample_period)) / static_cast<double>(n)});
  }
  return bins;
}

double compute_rmse(std::span<const double> series, std::span<const double> ref_series) {
  if (series.empty()) throw Error("compute_rmse: empty series");
  if (series.size() != ref_series.size()) throw Error("compute_rmse: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double e = series[i] - ref_series[i];
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(series.size()));
}

double compute_switching_frequency(std::span<const SwitchState> switches, double t_s) {
  if (switches.empty()) throw Error("compute_switching_frequency: empty series");
  if (switches.size() < 2) return 0.0;
  long transitions = 0;
  for (std::size_t i = 1; i < switches.size(); ++i) {
    for (std::size_t p = 0; p < 3; ++p) {
      transitions += std::abs(switches[i].s[p] - switches[i - 1].s[p]);
    }
  }
  const double span = static_cast<double>(switches.size() - 1) * t_s;
  return static_cast<double>(transitions) / (3.0 * span);
}

std::size_t steady_start(const TimeSeries& ts, const MetricWindow& w) {
  const auto n = ts.records.size();
  const auto tail = static_cast<std::size_t>(std::ceil(w.steady_fraction * static_cast<double>(n)));
  return n - std::min(n, std::max<std::size_t>(tail, 1));
}

double steady_fundamental_hz(const TimeSeries& ts, const MetricWindow& w) {
  const std::size_t s0 = steady_start(ts, w);
  double acc = 0.0;
  for (std::size_t i = s0; i < ts.records.size(); ++i) acc += ts.records[i].omega_e;
  const double mean = acc / static_cast<double>(ts.records.size() - s0);
  return std::abs(mean) / (2.0 * std::numbers::pi);
}

RunMetrics compute_metrics(const TimeSeries& ts, const MetricWindow& w) {
  if (ts.records.empty()) throw Error("compute_metrics: empty time series");
  const std::size_t s0 = steady_start(ts, w);
  const std::size_t n = ts.records.size() - s0;

  std::vector<double> i_a, te, te_ref, q, q_ref, p, p_ref, vo, vdc, vdc_ref;
  std::vector<SwitchState> sw_m, sw_n;
  for (std::size_t i = s0; i < ts.records.size(); ++i) {
    const StepRecord& r = ts.records[i];
    i_a.push_back(r.i_ma);
    te.push_back(r.t_e);
    te_ref.push_back(r.t_e_ref);
    q.push_back(r.q);
    q_ref.push_back(r.q_ref);
    p.push_back(r.p);
    p_ref.push_back(r.p_ref);
    vo.push_back(r.v_o);
    vdc.push_back(r.v_dc);
    vdc_ref.push_back(r.v_dc_ref);
    sw_m.push_back(r.s_m);
    sw_n.push_back(r.s_n);
  }

  RunMetrics m;
  m.thd_machine = std::numeric_limits<double>::quiet_NaN();
  const double f1 = steady_fundamental_hz(ts, w);
  if (f1 > 0.0) {
    // Shrink the window when the steady segment holds fewer periods.
    const int available = static_cast<int>(std::floor(static_cast<double>(n) * ts.t_s * f1));
    const int periods = std::min(w.thd_periods, available);
    if (periods >= 1) {
      try {
        m.thd_machine = compute_thd(i_a, f1, periods, ts.t_s);
      } catch (const Error&) {
        // left as NaN: no measurable fundamental
      }
    }
  }
  m.rmse_te = compute_rmse(te, te_ref);
  m.rmse_q = compute_rmse(q, q_ref);
  m.rmse_p = compute_rmse(p, p_ref);
  m.rmse_vo = compute_rmse(vo, std::vector<double>(n, 0.0));
  m.rmse_vdc = compute_rmse(vdc, vdc_ref);
  m.f_sw_machine = compute_switching_frequency(sw_m, ts.t_s);
  m.f_sw_grid = compute_switching_frequency(sw_n, ts.t_s);

  double nodes = 0.0;
  for (const StepRecord& r : ts.records) nodes += static_cast<double>(r.nodes_m + r.nodes_n);
  m.avg_nodes = nodes / static_cast<double>(ts.records.size());
  return m;
}

}  // namespace smpc
