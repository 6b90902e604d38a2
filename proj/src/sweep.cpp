#include "latitude/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iterator>
#include <ostream>

#include "latitude/csv_io.hpp"
#include "latitude/errors.hpp"

namespace latitude {

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "noise") return SweepAxis::noise;
  if (name == "density") return SweepAxis::density;
  if (name == "rank") return SweepAxis::rank;
  throw InvalidInput("unknown sweep axis '" + std::string(name) + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::noise:
      return "noise";
    case SweepAxis::density:
      return "density";
    case SweepAxis::rank:
      return "rank";
  }
  return "noise";
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  if (config.repeats == 0) throw InvalidInput("repeats must be >= 1");
  if (config.values.empty()) throw InvalidInput("sweep needs at least one value");
  if (config.methods.empty()) throw InvalidInput("sweep needs at least one method");
  if (config.cell_threads < 1) throw InvalidInput("cell_threads must be >= 1");

  // Build and validate every cell up front so that bad input fails before
  // any fitting starts.
  struct Cell {
    SynthSpec spec;
    std::size_t fit_rank;
    double value;
    std::size_t repeat;
  };
  std::vector<Cell> cells;
  for (double value : config.values) {
    for (std::size_t r = 0; r < config.repeats; ++r) {
      Cell cell{config.base, 0, value, r};
      switch (config.axis) {
        case SweepAxis::noise:
          cell.spec.noise_sigma = value;
          break;
        case SweepAxis::density:
          cell.spec.density = value;
          break;
        case SweepAxis::rank:
          if (!(value >= 1.0) || value != std::floor(value)) {
            throw InvalidInput("rank sweep values must be positive integers");
          }
          cell.spec.k_true = static_cast<std::size_t>(value);
          break;
      }
      cell.spec.seed = config.base.seed + r;
      cell.spec.validate();
      cell.fit_rank = config.axis == SweepAxis::rank
                          ? cell.spec.k_true
                          : config.fit_rank.value_or(cell.spec.k_true);
      for (Method method : config.methods) {
        if (method == Method::lattrunc && cell.fit_rank < 2) {
          throw InvalidInput("lattrunc needs k >= 2");
        }
      }
      cells.push_back(cell);
    }
  }

  std::vector<std::vector<MethodResult>> results(cells.size());
  std::vector<std::exception_ptr> failures(cells.size());
  const int threads = config.cell_threads;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::size_t c = 0; c < cells.size(); ++c) {
    try {
      const PlantedData data = gen_planted(cells[c].spec);
      results[c] = run_methods(data.clean, data.noisy, cells[c].fit_rank,
                               config.methods, config.solver);
    } catch (...) {
      failures[c] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (const MethodResult& r : results[c]) {
      rows.push_back(SweepRow{cells[c].value, cells[c].repeat, r.method,
                              r.abs_error, r.rel_error, r.wall_seconds});
    }
  }
  return rows;
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows) {
  std::vector<SweepSummary> out;
  for (const SweepRow& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SweepSummary& s) {
      return s.axis_value == row.axis_value && s.method == row.method;
    });
    if (it == out.end()) {
      out.push_back(SweepSummary{row.axis_value, row.method});
      it = std::prev(out.end());
    }
    ++it->count;
    it->mean_abs += row.abs_error;
    it->mean_rel += row.rel_error;
  }
  for (SweepSummary& s : out) {
    s.mean_abs /= static_cast<double>(s.count);
    s.mean_rel /= static_cast<double>(s.count);
  }
  for (const SweepRow& row : rows) {
    for (SweepSummary& s : out) {
      if (s.axis_value == row.axis_value && s.method == row.method) {
        s.std_abs += (row.abs_error - s.mean_abs) * (row.abs_error - s.mean_abs);
        s.std_rel += (row.rel_error - s.mean_rel) * (row.rel_error - s.mean_rel);
      }
    }
  }
  for (SweepSummary& s : out) {
    s.std_abs = std::sqrt(s.std_abs / static_cast<double>(s.count));
    s.std_rel = std::sqrt(s.std_rel / static_cast<double>(s.count));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis_value,repeat,method,abs_error,rel_error,seconds\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.axis_value) << ',' << r.repeat << ',' << r.method << ','
        << format_double(r.abs_error) << ',' << format_double(r.rel_error) << ','
        << format_double(r.seconds) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SweepSummary>& rows) {
  out << "axis_value,method,count,mean_abs_error,std_abs_error,mean_rel_error,"
         "std_rel_error\n";
  for (const SweepSummary& s : rows) {
    out << format_double(s.axis_value) << ',' << s.method << ',' << s.count << ','
        << format_double(s.mean_abs) << ',' << format_double(s.std_abs) << ','
        << format_double(s.mean_rel) << ',' << format_double(s.std_rel) << '\n';
  }
}

}  // namespace latitude
