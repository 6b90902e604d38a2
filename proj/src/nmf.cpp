#include "latitude/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "latitude/errors.hpp"
#include "linalg.hpp"

namespace latitude {

namespace {

// Gram = X X^T for a row-major k x p matrix X (rows are factor components).
std::vector<double> row_gram(const DenseMatrix& X) {
  const std::size_t k = X.rows();
  std::vector<double> G(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    auto ra = X.row(a);
    for (std::size_t b = a; b < k; ++b) {
      auto rb = X.row(b);
      double s = 0.0;
      for (std::size_t j = 0; j < ra.size(); ++j) s += ra[j] * rb[j];
      G[a * k + b] = s;
      G[b * k + a] = s;
    }
  }
  return G;
}

void add_ridge(std::vector<double>& G, std::size_t k) {
  double trace = 0.0;
  for (std::size_t s = 0; s < k; ++s) trace += G[s * k + s];
  const double ridge = 1e-12 * trace;
  for (std::size_t s = 0; s < k; ++s) G[s * k + s] += ridge;
}

// Solves min ||A - W H||_F over H (k x m) given W (n x k), then projects onto
// H >= 0. Wt is W transposed (k x n).
DenseMatrix projected_ls(const DenseMatrix& A, const DenseMatrix& Wt) {
  const std::size_t k = Wt.rows(), n = A.rows(), m = A.cols();
  std::vector<double> G = row_gram(Wt);
  add_ridge(G, k);
  // R = W^T A, k x m.
  DenseMatrix R(k, m);
  for (std::size_t s = 0; s < k; ++s) {
    auto rrow = R.row(s);
    auto wrow = Wt.row(s);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = wrow[i];
      if (w == 0.0) continue;
      auto arow = A.row(i);
      for (std::size_t j = 0; j < m; ++j) rrow[j] += w * arow[j];
    }
  }
  DenseMatrix H(k, m);
  std::vector<double> rhs(k);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t s = 0; s < k; ++s) rhs[s] = R(s, j);
    const std::vector<double> h = linalg::spd_solve(G, k, rhs);
    for (std::size_t s = 0; s < k; ++s) H(s, j) = std::max(0.0, h[s]);
  }
  return H;
}

double reconstruction_error(const DenseMatrix& A, const DenseMatrix& B,
                            const DenseMatrix& C) {
  return frobenius_error(A, matmul(B, C)).absolute;
}

}  // namespace

FactorPair random_factors(std::size_t n, std::size_t m, std::size_t k,
                          std::uint64_t seed) {
  if (n == 0 || m == 0 || k == 0) {
    throw InvalidInput("factor dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  FactorPair f{DenseMatrix(n, k), DenseMatrix(k, m)};
  for (double& v : f.B.values()) v = unif(rng);
  for (double& v : f.C.values()) v = unif(rng);
  return f;
}

NmfResult nmf_fit(const DenseMatrix& A, const NmfConfig& config) {
  if (A.empty()) throw InvalidInput("NMF input is empty");
  if (config.k == 0) throw InvalidInput("NMF rank must be >= 1");
  return nmf_fit_from(A, random_factors(A.rows(), A.cols(), config.k, config.seed),
                      config);
}

NmfResult nmf_fit_from(const DenseMatrix& A, FactorPair initial,
                       const NmfConfig& config) {
  if (A.empty()) throw InvalidInput("NMF input is empty");
  if (!A.all_finite() || !A.is_nonnegative()) {
    throw InvalidInput("NMF input must be finite and nonnegative");
  }
  if (config.max_iterations == 0) throw InvalidInput("NMF needs max_iterations >= 1");
  const std::size_t n = A.rows(), m = A.cols(), k = initial.B.cols();
  if (k == 0 || initial.B.rows() != n || initial.C.rows() != k ||
      initial.C.cols() != m) {
    throw InvalidInput("initial factors do not match the input shape");
  }

  NmfResult result{DenseMatrix(n, k), DenseMatrix(k, m), {}, 0.0};
  if (A.frobenius_norm() == 0.0) return result;

  DenseMatrix B = std::move(initial.B);
  DenseMatrix C = std::move(initial.C);
  const DenseMatrix At = A.transpose();
  double best = std::numeric_limits<double>::infinity();
  double previous = reconstruction_error(A, B, C);

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    C = projected_ls(A, B.transpose());
    B = projected_ls(At, C).transpose();
    const double err = reconstruction_error(A, B, C);
    result.error_trace.push_back(err);
    if (err < best) {
      best = err;
      result.B = B;
      result.C = C;
    }
    if (err == 0.0) break;
    const double improvement = (previous - err) / previous;
    if (improvement >= 0.0 && improvement < config.relative_improvement_floor) break;
    previous = err;
  }
  result.error = best;
  return result;
}

}  // namespace latitude
