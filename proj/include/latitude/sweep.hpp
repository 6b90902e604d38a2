#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latitude/baselines.hpp"
#include "latitude/synth.hpp"

namespace latitude {

enum class SweepAxis { noise, density, rank };

SweepAxis parse_sweep_axis(std::string_view name);
std::string to_string(SweepAxis axis);

struct SweepConfig {
  SynthSpec base;
  SweepAxis axis = SweepAxis::noise;
  std::vector<double> values;
  std::vector<Method> methods;
  std::size_t repeats = 10;
  /// Rank used for fitting. Defaults to the planted rank of each cell (on
  /// the rank axis that is the swept value).
  std::optional<std::size_t> fit_rank;
  SolverConfig solver;
  /// Cells evaluated concurrently. Rows come back in (value, repeat,
  /// method) order regardless.
  int cell_threads = 1;
};

/// One CSV row: axis_value, repeat, method, abs_error, rel_error, seconds.
struct SweepRow {
  double axis_value = 0.0;
  std::size_t repeat = 0;
  std::string method;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double seconds = 0.0;
};

struct SweepSummary {
  double axis_value = 0.0;
  std::string method;
  std::size_t count = 0;
  double mean_abs = 0.0;
  double std_abs = 0.0;
  double mean_rel = 0.0;
  double std_rel = 0.0;
};

/// Repeat r of every value uses data seed base.seed + r, so cells along the
/// axis share factors and differ only in the swept quantity. Errors are
/// measured against the noise-free matrix.
std::vector<SweepRow> sweep(const SweepConfig& config);

/// Mean and population standard deviation per (value, method), in first
/// appearance order.
std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SweepSummary>& rows);

}  // namespace latitude
