#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace latitude {

struct BenchRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  /// Median wall time of one outer solver iteration.
  double seconds_per_iteration = 0.0;
};

/// Times the solver's outer iterations on mixed synthetic data of each row
/// count in `sizes`, with m columns and rank k. NMF initialization is not
/// timed.
std::vector<BenchRow> run_bench(std::span<const std::size_t> sizes, std::size_t m,
                                std::size_t k, std::size_t niter,
                                std::uint64_t seed);

/// Least-squares slope of log(seconds) against log(n).
double loglog_slope(const std::vector<BenchRow>& rows);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace latitude
