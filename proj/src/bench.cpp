#include "latitude/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "latitude/csv_io.hpp"
#include "latitude/errors.hpp"
#include "latitude/solver.hpp"
#include "latitude/synth.hpp"

namespace latitude {

std::vector<BenchRow> run_bench(std::span<const std::size_t> sizes, std::size_t m,
                                std::size_t k, std::size_t niter,
                                std::uint64_t seed) {
  if (sizes.empty()) throw InvalidInput("bench needs at least one size");
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    SynthSpec spec;
    spec.n = n;
    spec.m = m;
    spec.k_true = k;
    spec.seed = seed;
    const PlantedData data = gen_planted(spec);

    SolverConfig cfg;
    cfg.k = k;
    cfg.niter = niter;
    cfg.seed = seed;
    cfg.nmf_config.max_iterations = 20;
    const FitResult fit = latitude_fit(data.noisy, cfg);

    std::vector<double> times = fit.report.wall_time_per_iteration;
    std::sort(times.begin(), times.end());
    const double median = times.size() % 2
                              ? times[times.size() / 2]
                              : 0.5 * (times[times.size() / 2 - 1] +
                                       times[times.size() / 2]);
    rows.push_back(BenchRow{n, m, k, median});
  }
  return rows;
}

double loglog_slope(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw InvalidInput("slope needs at least two sizes");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const BenchRow& r : rows) {
    if (!(r.seconds_per_iteration > 0.0)) {
      throw NumericalError("non-positive timing in bench results");
    }
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(r.seconds_per_iteration);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = static_cast<double>(rows.size());
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) throw InvalidInput("slope needs at least two distinct sizes");
  return (count * sxy - sx * sy) / denom;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,m,k,seconds_per_iteration\n";
  for (const BenchRow& r : rows) {
    out << r.n << ',' << r.m << ',' << r.k << ','
        << format_double(r.seconds_per_iteration) << '\n';
  }
}

}  // namespace latitude
