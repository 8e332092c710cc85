#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smpc/metrics.hpp"
#include "smpc/scenario.hpp"
#include "smpc/sweep.hpp"

namespace smpc {

/// Shortest round-trip-stable text with 9 significant digits.
std::string format_number(double v);

void write_timeseries_csv(std::ostream& out, const TimeSeries& ts);
void write_metrics_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumBin>& bins);

}  // namespace smpc
