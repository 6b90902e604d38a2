#include "latitude/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latitude/errors.hpp"
#include "linalg.hpp"

namespace latitude {

namespace {

// Solves the normal equations restricted to the passive set; entries outside
// the set are zero.
std::vector<double> passive_solve(std::span<const double> G,
                                  std::span<const double> h, std::size_t k,
                                  const std::vector<bool>& passive) {
  std::vector<std::size_t> idx;
  for (std::size_t s = 0; s < k; ++s) {
    if (passive[s]) idx.push_back(s);
  }
  const std::size_t p = idx.size();
  std::vector<double> Gp(p * p), hp(p);
  for (std::size_t a = 0; a < p; ++a) {
    hp[a] = h[idx[a]];
    for (std::size_t b = 0; b < p; ++b) Gp[a * p + b] = G[idx[a] * k + idx[b]];
  }
  const std::vector<double> zp = linalg::spd_solve(Gp, p, hp);
  std::vector<double> z(k, 0.0);
  for (std::size_t a = 0; a < p; ++a) z[idx[a]] = zp[a];
  return z;
}

void gradient(std::span<const double> G, std::span<const double> h,
              std::size_t k, const std::vector<double>& x,
              std::vector<double>& w) {
  for (std::size_t s = 0; s < k; ++s) {
    double v = h[s];
    for (std::size_t r = 0; r < k; ++r) v -= G[s * k + r] * x[r];
    w[s] = v;
  }
}

}  // namespace

NnlsResult nnls_solve_gram(std::span<const double> G, std::span<const double> h,
                           std::size_t k, double tolerance,
                           std::size_t max_iterations) {
  if (k == 0) throw InvalidInput("NNLS needs at least one column");
  if (G.size() != k * k || h.size() != k) {
    throw InvalidInput("NNLS Gram system has inconsistent sizes");
  }
  if (!(tolerance > 0.0)) throw InvalidInput("NNLS tolerance must be positive");
  if (max_iterations == 0) throw InvalidInput("NNLS needs max_iterations >= 1");

  NnlsResult result;
  result.tolerance = tolerance;
  std::vector<double>& x = result.x;
  x.assign(k, 0.0);
  std::vector<bool> passive(k, false), blocked(k, false);
  std::vector<double> w(k);
  gradient(G, h, k, x, w);

  while (true) {
    std::size_t enter = k;
    double best = tolerance;
    for (std::size_t s = 0; s < k; ++s) {
      if (!passive[s] && !blocked[s] && w[s] > best) {
        best = w[s];
        enter = s;
      }
    }
    if (enter == k) break;
    if (result.iterations >= max_iterations) {
      result.converged = false;
      break;
    }
    ++result.iterations;
    passive[enter] = true;

    bool entered = true;
    for (std::size_t inner = 0; inner <= 3 * k; ++inner) {
      std::vector<double> z = passive_solve(G, h, k, passive);
      bool feasible = true;
      for (std::size_t s = 0; s < k; ++s) {
        if (passive[s] && z[s] <= 0.0) feasible = false;
      }
      if (feasible) {
        x = std::move(z);
        break;
      }
      // Step from x toward z until the first passive variable hits zero.
      double step = 1.0;
      std::size_t hit = k;
      for (std::size_t s = 0; s < k; ++s) {
        if (passive[s] && z[s] <= 0.0) {
          const double denom = x[s] - z[s];
          const double a = denom > 0.0 ? x[s] / denom : 0.0;
          if (a < step) {
            step = a;
            hit = s;
          }
        }
      }
      for (std::size_t s = 0; s < k; ++s) {
        if (passive[s]) x[s] += step * (z[s] - x[s]);
      }
      for (std::size_t s = 0; s < k; ++s) {
        if (passive[s] && (s == hit || x[s] <= 0.0)) {
          passive[s] = false;
          x[s] = 0.0;
          if (s == enter && inner == 0) entered = false;
        }
      }
    }

    // An index that bounces straight back out is excluded until some other
    // index enters successfully.
    if (entered) {
      std::fill(blocked.begin(), blocked.end(), false);
    } else {
      blocked[enter] = true;
    }
    gradient(G, h, k, x, w);
  }

  for (double& v : x) v = std::max(v, 0.0);
  return result;
}

NnlsResult nnls_solve(const DenseMatrix& B, std::span<const double> b,
                      const NnlsConfig& config) {
  if (B.empty()) throw InvalidInput("NNLS design matrix is empty");
  if (b.size() != B.rows()) {
    throw InvalidInput("NNLS right-hand side length does not match rows");
  }
  if (!B.all_finite() ||
      !std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidInput("NNLS inputs must be finite");
  }
  const std::size_t n = B.rows(), k = B.cols();
  std::vector<double> G(k * k, 0.0), h(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = B.row(i);
    for (std::size_t s = 0; s < k; ++s) {
      h[s] += row[s] * b[i];
      for (std::size_t r = s; r < k; ++r) G[s * k + r] += row[s] * row[r];
    }
  }
  double max_norm = 0.0;
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t r = 0; r < s; ++r) G[s * k + r] = G[r * k + s];
    max_norm = std::max(max_norm, std::sqrt(G[s * k + s]));
  }
  double tol = config.kkt_tolerance.value_or(1e-10 * max_norm);
  if (!(tol > 0.0)) tol = std::numeric_limits<double>::min();
  const std::size_t budget = config.max_iterations.value_or(3 * k);

  NnlsResult result = nnls_solve_gram(G, h, k, tol, budget);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = B.row(i);
    double fit = 0.0;
    for (std::size_t s = 0; s < k; ++s) fit += row[s] * result.x[s];
    rss += (b[i] - fit) * (b[i] - fit);
  }
  result.residual_norm = std::sqrt(rss);
  return result;
}

}  // namespace latitude
