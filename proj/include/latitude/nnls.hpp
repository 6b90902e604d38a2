#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "latitude/matrix.hpp"

namespace latitude {

struct NnlsConfig {
  /// KKT tolerance on the gradient. Unset means 1e-10 times the largest
  /// column norm of the design matrix.
  std::optional<double> kkt_tolerance;
  /// Outer (entering-variable) iteration budget. Unset means 3 * columns.
  std::optional<std::size_t> max_iterations;
};

struct NnlsResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
  double tolerance = 0.0;
};

/// argmin_{x >= 0} ||b - B x||_2 by the Lawson-Hanson active-set method.
///
/// The passive-set subproblems are solved on the normal equations (Cholesky,
/// with a minimum-norm eigen fallback when the passive columns are rank
/// deficient). The entering variable is the one with the largest positive
/// component of B^T (b - B x); ties go to the smallest index. If the budget
/// runs out the best feasible iterate is returned with converged = false.
NnlsResult nnls_solve(const DenseMatrix& B, std::span<const double> b,
                      const NnlsConfig& config = {});

/// Same method on a precomputed Gram system: G = B^T B (k x k, row-major),
/// h = B^T b. residual_norm is left at zero; callers that need it compute
/// it against the original design.
NnlsResult nnls_solve_gram(std::span<const double> G, std::span<const double> h,
                           std::size_t k, double tolerance,
                           std::size_t max_iterations);

}  // namespace latitude
