#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "latitude/matrix.hpp"

namespace latitude {

struct NmfConfig {
  std::size_t k = 10;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  /// Stop once an iteration lowers the error by less than this fraction.
  double relative_improvement_floor = 1e-5;
};

struct NmfResult {
  DenseMatrix B;
  DenseMatrix C;
  /// ||A - BC||_F after each iteration.
  std::vector<double> error_trace;
  /// ||A - BC||_F of the returned (best) pair.
  double error = 0.0;
};

struct FactorPair {
  DenseMatrix B;
  DenseMatrix C;
};

/// Entries i.i.d. uniform on [0, 1), deterministic in the seed.
FactorPair random_factors(std::size_t n, std::size_t m, std::size_t k,
                          std::uint64_t seed);

/// Projected ALS: each half-step solves the ridge-stabilized normal
/// equations and clamps negatives to zero. Returns the best iterate seen.
NmfResult nmf_fit(const DenseMatrix& A, const NmfConfig& config);

/// As above, starting from the given factors instead of random ones.
NmfResult nmf_fit_from(const DenseMatrix& A, FactorPair initial,
                       const NmfConfig& config);

}  // namespace latitude
