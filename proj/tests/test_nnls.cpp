#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "latitude/errors.hpp"
#include "latitude/nnls.hpp"

using namespace latitude;

namespace {

// Exhaustive oracle: least squares on every support set, keep the best
// feasible one. Returns the optimal objective ||b - Bx||.
double enumerate_nnls(const DenseMatrix& B, const std::vector<double>& b) {
  const std::size_t n = B.rows(), k = B.cols();
  Eigen::VectorXd bv(n);
  for (std::size_t i = 0; i < n; ++i) bv(i) = b[i];
  double best = bv.norm();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t s = 0; s < k; ++s) {
      if (mask & (1u << s)) cols.push_back(s);
    }
    Eigen::MatrixXd Bs(n, cols.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < cols.size(); ++c) Bs(i, c) = B(i, cols[c]);
    }
    const Eigen::VectorXd z = Bs.completeOrthogonalDecomposition().solve(bv);
    if (z.minCoeff() < 0.0) continue;
    best = std::min(best, (bv - Bs * z).norm());
  }
  return best;
}

std::vector<double> kkt_gradient(const DenseMatrix& B, const std::vector<double>& b,
                                 const std::vector<double>& x) {
  std::vector<double> g(B.cols(), 0.0);
  for (std::size_t i = 0; i < B.rows(); ++i) {
    double r = -b[i];
    for (std::size_t s = 0; s < B.cols(); ++s) r += B(i, s) * x[s];
    for (std::size_t s = 0; s < B.cols(); ++s) g[s] += B(i, s) * r;
  }
  return g;
}

}  // namespace

TEST_CASE("nnls fixed examples") {
  SUBCASE("identity") {
    const NnlsResult r = nnls_solve(DenseMatrix::identity(2), std::vector<double>{2, 3});
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == doctest::Approx(3.0));
    CHECK(r.residual_norm == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.converged);
  }
  SUBCASE("unconstrained optimum infeasible") {
    const DenseMatrix B = DenseMatrix::from_rows({{2, 1}, {1, 2}});
    const NnlsResult r = nnls_solve(B, std::vector<double>{1, 0});
    CHECK(r.x[0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(r.x[1] == 0.0);
    CHECK(r.residual_norm == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
  }
  SUBCASE("zero right-hand side") {
    const DenseMatrix B = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    const NnlsResult r = nnls_solve(B, std::vector<double>{0, 0, 0});
    CHECK(r.x == std::vector<double>{0, 0});
    CHECK(r.iterations == 0);
  }
}

TEST_CASE("nnls rank-deficient active set") {
  // Duplicate columns: any split of the weight is optimal.
  const DenseMatrix B = DenseMatrix::from_rows({{1, 1, 0}, {2, 2, 0}, {0, 0, 1}});
  const NnlsResult r = nnls_solve(B, std::vector<double>{1, 2, 3});
  CHECK(r.residual_norm == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(1.0));
  CHECK(r.x[2] == doctest::Approx(3.0));
}

TEST_CASE("nnls rejects malformed input") {
  const DenseMatrix B = DenseMatrix::identity(2);
  CHECK_THROWS_AS(nnls_solve(B, std::vector<double>{1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(nnls_solve(B, std::vector<double>{1, std::numeric_limits<double>::quiet_NaN()}),
                  InvalidInput);
}

TEST_CASE("nnls budget exhaustion returns a feasible iterate") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  DenseMatrix B(12, 6);
  for (double& v : B.values()) v = g(rng);
  std::vector<double> b(12);
  for (double& v : b) v = g(rng);
  NnlsConfig cfg;
  cfg.max_iterations = 1;
  const NnlsResult r = nnls_solve(B, b, cfg);
  for (double v : r.x) CHECK(v >= 0.0);
  double bn = 0.0;
  for (double v : b) bn += v * v;
  CHECK(r.residual_norm <= std::sqrt(bn) + 1e-12);
  CHECK(r.iterations <= 1);
}

TEST_CASE("nnls matches support enumeration and satisfies KKT") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> nd(1, 20), kd(1, 6);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = nd(rng), k = kd(rng);
    DenseMatrix B(n, k);
    for (double& v : B.values()) v = g(rng);
    std::vector<double> b(n);
    for (double& v : b) v = g(rng);

    const NnlsResult r = nnls_solve(B, b);
    const NnlsResult again = nnls_solve(B, b);
    CHECK(r.x == again.x);
    CHECK(r.converged);

    for (double v : r.x) CHECK(v >= 0.0);
    CHECK(std::abs(r.residual_norm - enumerate_nnls(B, b)) < 1e-8);

    double bn = 0.0;
    for (double v : b) bn += v * v;
    CHECK(r.residual_norm <= std::sqrt(bn) + 1e-12);

    const std::vector<double> grad = kkt_gradient(B, b, r.x);
    // Stationarity on the support is only as good as the conditioning of the
    // passive subproblem; allow the solver tolerance plus rounding.
    const double slack = r.tolerance;
    for (std::size_t s = 0; s < k; ++s) {
      CHECK(grad[s] >= -slack);
      if (r.x[s] > 0.0) CHECK(std::abs(grad[s]) <= slack);
    }
  }
}
