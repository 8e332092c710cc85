#pragma once

#include <span>
#include <vector>

#include "smpc/plant.hpp"
#include "smpc/scenario.hpp"

namespace smpc {

struct RunMetrics {
  double thd_machine = 0.0;
  double rmse_te = 0.0;
  double rmse_q = 0.0;
  double rmse_p = 0.0;
  double rmse_vo = 0.0;
  double rmse_vdc = 0.0;
  double f_sw_machine = 0.0;
  double f_sw_grid = 0.0;
  double avg_nodes = 0.0;
};

/// THD = sqrt(sum_{h>=2} |X_h|^2) / |X_1| over the trailing `window_periods`
/// fundamental periods of `signal`. Harmonics are evaluated at exact multiples
/// of the fundamental, up to Nyquist.
double compute_thd(std::span<const double> signal, double fundamental_hz, int window_periods,
                   double sample_period);

double compute_rmse(std::span<const double> series, std::span<const double> ref_series);

/// Average per-phase switching rate: sum of |level changes| over the three
/// phases divided by 3 * (N - 1) * t_s.
double compute_switching_frequency(std::span<const SwitchState> switches, double t_s);

struct SpectrumBin {
  double frequency = 0.0;
  double magnitude = 0.0;  // single-sided amplitude
};

/// DFT amplitudes of the trailing window used for the THD figure.
std::vector<SpectrumBin> compute_spectrum(std::span<const double> signal, double fundamental_hz,
                                          int window_periods, double sample_period);

struct MetricWindow {
  double steady_fraction = 0.4;  // trailing share of the run treated as steady state
  int thd_periods = 5;
};

/// First record index of the steady-state segment.
std::size_t steady_start(const TimeSeries& ts, const MetricWindow& w = {});

/// Mean electrical frequency over the steady-state segment, Hz.
double steady_fundamental_hz(const TimeSeries& ts, const MetricWindow& w = {});

RunMetrics compute_metrics(const TimeSeries& ts, const MetricWindow& w = {});

}  // namespace smpc
