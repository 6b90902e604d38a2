#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latitude/errors.hpp"

namespace latitude::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

bool cholesky_solve(std::span<const double> G, std::size_t p,
                    std::span<double> rhs) {
  std::vector<double> L(p * p, 0.0);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, G[i * p + i]);
  const double floor = 16.0 * static_cast<double>(p) * kEps * max_diag;
  for (std::size_t j = 0; j < p; ++j) {
    double d = G[j * p + j];
    for (std::size_t s = 0; s < j; ++s) d -= L[j * p + s] * L[j * p + s];
    if (!(d > floor)) return false;
    const double ljj = std::sqrt(d);
    L[j * p + j] = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double v = G[i * p + j];
      for (std::size_t s = 0; s < j; ++s) v -= L[i * p + s] * L[j * p + s];
      L[i * p + j] = v / ljj;
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    double v = rhs[i];
    for (std::size_t s = 0; s < i; ++s) v -= L[i * p + s] * rhs[s];
    rhs[i] = v / L[i * p + i];
  }
  for (std::size_t i = p; i-- > 0;) {
    double v = rhs[i];
    for (std::size_t s = i + 1; s < p; ++s) v -= L[s * p + i] * rhs[s];
    rhs[i] = v / L[i * p + i];
  }
  return true;
}

std::vector<double> least_norm_solve(std::span<const double> G, std::size_t p,
                                     std::span<const double> rhs) {
  std::vector<double> a(G.begin(), G.end());
  std::vector<double> Q(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) Q[i * p + i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        total += a[i * p + j] * a[i * p + j];
        if (i != j) off += a[i * p + j] * a[i * p + j];
      }
    }
    if (off <= kEps * kEps * total) break;
    for (std::size_t r = 0; r + 1 < p; ++r) {
      for (std::size_t c = r + 1; c < p; ++c) {
        const double arc = a[r * p + c];
        if (arc == 0.0) continue;
        const double theta = (a[c * p + c] - a[r * p + r]) / (2.0 * arc);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0), sn = t * cs;
        for (std::size_t s = 0; s < p; ++s) {
          const double x = a[s * p + r], y = a[s * p + c];
          a[s * p + r] = cs * x - sn * y;
          a[s * p + c] = sn * x + cs * y;
        }
        for (std::size_t s = 0; s < p; ++s) {
          const double x = a[r * p + s], y = a[c * p + s];
          a[r * p + s] = cs * x - sn * y;
          a[c * p + s] = sn * x + cs * y;
        }
        for (std::size_t s = 0; s < p; ++s) {
          const double x = Q[s * p + r], y = Q[s * p + c];
          Q[s * p + r] = cs * x - sn * y;
          Q[s * p + c] = sn * x + cs * y;
        }
      }
    }
  }

  double max_eig = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_eig = std::max(max_eig, a[i * p + i]);
  const double cutoff = static_cast<double>(p) * kEps * max_eig * 16.0;
  std::vector<double> x(p, 0.0);
  for (std::size_t e = 0; e < p; ++e) {
    const double lambda = a[e * p + e];
    if (!(lambda > cutoff)) continue;
    double proj = 0.0;
    for (std::size_t s = 0; s < p; ++s) proj += Q[s * p + e] * rhs[s];
    proj /= lambda;
    for (std::size_t s = 0; s < p; ++s) x[s] += proj * Q[s * p + e];
  }
  return x;
}

std::vector<double> spd_solve(std::span<const double> G, std::size_t p,
                              std::span<const double> rhs) {
  std::vector<double> x(rhs.begin(), rhs.end());
  if (cholesky_solve(G, p, x)) return x;
  return least_norm_solve(G, p, rhs);
}

Svd jacobi_svd(const DenseMatrix& A) {
  if (A.empty()) throw InvalidInput("SVD of empty matrix");
  const bool transposed = A.rows() < A.cols();
  // Work on the tall orientation; columns of W are rotated in place.
  const DenseMatrix tall = transposed ? A.transpose() : A;
  const std::size_t n = tall.rows(), m = tall.cols();

  // Column-major copy so that column pairs are contiguous.
  std::vector<double> W(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) W[j * n + i] = tall(i, j);
  }
  std::vector<double> V(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) V[j * m + j] = 1.0;

  constexpr int kMaxSweeps = 80;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double* wp = &W[p * n];
        double* wq = &W[q * n];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) {
          continue;
        }
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = wp[i], y = wq[i];
          wp[i] = c * x - s * y;
          wq[i] = s * x + c * y;
        }
        double* vp = &V[p * m];
        double* vq = &V[q * m];
        for (std::size_t i = 0; i < m; ++i) {
          const double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
  }
  if (!converged) throw NumericalError("Jacobi SVD did not converge");

  std::vector<double> sigma(m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += W[j * n + i] * W[j * n + i];
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sigma[a] > sigma[b];
  });

  DenseMatrix U(n, m), Vout(m, m);
  std::vector<double> sorted(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t j = order[r];
    sorted[r] = sigma[j];
    const double inv = sigma[j] > 0.0 ? 1.0 / sigma[j] : 0.0;
    for (std::size_t i = 0; i < n; ++i) U(i, r) = W[j * n + i] * inv;
    for (std::size_t i = 0; i < m; ++i) Vout(i, r) = V[j * m + i];
  }
  if (transposed) return Svd{std::move(sorted), std::move(Vout), std::move(U)};
  return Svd{std::move(sorted), std::move(U), std::move(Vout)};
}

}  // namespace latitude::linalg
