#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "latitude/matrix.hpp"
#include "latitude/nmf.hpp"
#include "latitude/nnls.hpp"

namespace latitude {

enum class InitMode { nmf, random };

struct SolverConfig {
  std::size_t k = 10;
  std::size_t niter = 40;
  double M = 5.0;
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::nmf;
  /// Its k and seed are overridden by the fields above.
  NmfConfig nmf_config;
  NnlsConfig nnls_config;
  std::size_t bisect_iterations = 50;
  /// Threads for the per-column and per-row sweeps. Output does not depend
  /// on this value.
  int threads = 1;

  void validate() const;
};

struct FitReport {
  /// Absolute error ||A - mixed||_F after each outer iteration.
  std::vector<double> error_trace;
  /// ||A - BC||_F of the initial factors.
  double init_nmf_error = 0.0;
  /// Mixed-model error of the initial factors under the initial params.
  double init_mixed_error = 0.0;
  /// min(init_nmf_error, init_mixed_error).
  double initial_error = 0.0;
  double best_error = 0.0;
  /// 0 is the initial state, q >= 1 the state after outer iteration q.
  std::size_t best_iteration = 0;
  std::vector<double> wall_time_per_iteration;
};

struct FitResult {
  MixedFactorization factorization;
  FitReport report;
};

/// Alternating mixed-model fit. Starts from NMF (or random) factors, then for
/// niter rounds re-solves every column of C together with its ro entry and
/// every row of B together with its co entry. The lowest-error state seen is
/// returned. The initial factors count twice: under the initial params and
/// as the plain product BC (returned with standard_only set), so the result
/// is never worse than the initializer.
FitResult latitude_fit(const DenseMatrix& A, const SolverConfig& config);

/// Fit from caller-supplied initial factors.
FitResult latitude_fit_from(const DenseMatrix& A, FactorPair initial,
                            const SolverConfig& config);

/// Ranks rows (columns) by the row (column) sums of BC - A. The row with
/// the smallest sum gets -M and the largest gets 0, with evenly spaced
/// values in between.
ParamVectors init_parameters(const DenseMatrix& A, const DenseMatrix& B,
                             const DenseMatrix& C, double M);

/// Y = B .* T where T_is = 1 at the winning term argmax_s B_is c_s and
/// 1 - alpha_i elsewhere. Ties go to the smallest s.
DenseMatrix build_coefficient_matrix(const DenseMatrix& B,
                                     std::span<const double> c,
                                     std::span<const double> alpha);

/// Column error ||a - (alpha .* (B max-times c) + (1 - alpha) .* Bc)||
/// with alpha_i = sigmoid(co_i + t).
double column_error(std::span<const double> a, const DenseMatrix& B,
                    std::span<const double> c, std::span<const double> co,
                    double t);

/// Bisection on [-M, M] for a zero of d/dt of the squared column error.
/// The candidates are the bisection point (when the derivative changes sign
/// from negative to positive), -M and M; t_in is kept unless one of them is
/// strictly better.
double update_t(std::span<const double> a, const DenseMatrix& B,
                std::span<const double> c, std::span<const double> co,
                double M, double t_in, std::size_t bisect_iterations);

struct MixRegressionResult {
  std::vector<double> c;
  double t = 0.0;
};

/// One column subproblem: NNLS against the frozen coefficient matrix built
/// from c0 and t0, then update_t for the new c. Falls back to (c0, t0) when
/// that pair has a strictly lower column error.
MixRegressionResult solve_mix_regression(std::span<const double> a,
                                         const DenseMatrix& B,
                                         std::span<const double> c0,
                                         std::span<const double> co, double t0,
                                         double M, const NnlsConfig& nnls_config,
                                         std::size_t bisect_iterations);

}  // namespace latitude
