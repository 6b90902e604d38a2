#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "latitude/errors.hpp"
#include "latitude/matrix.hpp"

using namespace latitude;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng,
                          double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseMatrix M(r, c);
  for (double& v : M.values()) v = u(rng);
  return M;
}

// Entry-by-entry oracles, written independently of the row-sweep kernels.
double naive_sum(const DenseMatrix& B, const DenseMatrix& C, std::size_t i,
                 std::size_t j) {
  double s = 0.0;
  for (std::size_t t = 0; t < B.cols(); ++t) s += B(i, t) * C(t, j);
  return s;
}

double naive_max(const DenseMatrix& B, const DenseMatrix& C, std::size_t i,
                 std::size_t j) {
  double s = B(i, 0) * C(0, j);
  for (std::size_t t = 1; t < B.cols(); ++t) s = std::max(s, B(i, t) * C(t, j));
  return s;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

const double kHalfRoot3 = std::sqrt(3.0) / 2.0;

}  // namespace

TEST_CASE("DenseMatrix construction enforces shape") {
  CHECK_THROWS_AS(DenseMatrix(0, 3), InvalidInput);
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), InvalidInput);
  const DenseMatrix M = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(M.rows() == 2);
  CHECK(M.cols() == 3);
  CHECK(M(1, 2) == 6);
  CHECK(M.transpose()(2, 1) == 6);
  CHECK(M.column(1) == std::vector<double>{2, 5});
}

TEST_CASE("matmul") {
  CHECK(matmul(DenseMatrix::from_rows({{1, 2}}), DenseMatrix::from_rows({{3}, {4}})) ==
        DenseMatrix::from_rows({{11}}));

  const DenseMatrix C = DenseMatrix::from_rows({{1, -2}, {3, 4}, {5, 6.5}});
  CHECK(matmul(DenseMatrix::identity(3), C) == C);

  std::mt19937_64 rng(7);
  const DenseMatrix B = random_matrix(6, 4, rng, -1, 1);
  const DenseMatrix D = random_matrix(4, 5, rng, -1, 1);
  const DenseMatrix P = matmul(B, D);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 5; ++j) CHECK(rel_diff(P(i, j), naive_sum(B, D, i, j)) < 1e-12);
  }

  CHECK_THROWS_AS(matmul(B, B), InvalidInput);
}

TEST_CASE("maxtimes_product") {
  const DenseMatrix B = DenseMatrix::from_rows({{1, 0}, {0, 2}});
  const DenseMatrix C = DenseMatrix::from_rows({{3, 1}, {1, 1}});
  CHECK(maxtimes_product(B, C) == DenseMatrix::from_rows({{3, 1}, {2, 2}}));

  SUBCASE("rank one equals the standard product") {
    std::mt19937_64 rng(3);
    const DenseMatrix b = random_matrix(5, 1, rng);
    const DenseMatrix c = random_matrix(1, 4, rng);
    CHECK(maxtimes_product(b, c) == matmul(b, c));
  }

  SUBCASE("constant factors from the constant-factor construction") {
    const DenseMatrix Bc(3, 4, kHalfRoot3), Cc(4, 2, kHalfRoot3);
    const DenseMatrix X = maxtimes_product(Bc, Cc), S = matmul(Bc, Cc);
    for (double v : X.values()) CHECK(v == doctest::Approx(0.75).epsilon(1e-15));
    for (double v : S.values()) CHECK(v == doctest::Approx(3.0).epsilon(1e-15));
  }

  SUBCASE("random instances match the naive oracle") {
    std::mt19937_64 rng(11);
    const DenseMatrix Bm = random_matrix(7, 5, rng), Cm = random_matrix(5, 6, rng);
    const DenseMatrix P = maxtimes_product(Bm, Cm);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 6; ++j) CHECK(P(i, j) == naive_max(Bm, Cm, i, j));
    }
  }

  CHECK_THROWS_AS(maxtimes_product(DenseMatrix::from_rows({{-1.0}}), DenseMatrix::from_rows({{1.0}})),
                  InvalidInput);
  CHECK_THROWS_AS(maxtimes_product(B, DenseMatrix(3, 1)), InvalidInput);
}

TEST_CASE("alpha_matrix") {
  CHECK(alpha_matrix(ParamVectors{{0.0}, {0.0}, 5.0})(0, 0) == 0.5);
  const double s5 = alpha_matrix(ParamVectors{{5.0}, {0.0}, 5.0})(0, 0);
  CHECK(std::round(s5 * 1e4) / 1e4 == doctest::Approx(0.9933).epsilon(1e-12));
  // 1 / (1 + e^10) from a 30-digit evaluation.
  CHECK(alpha_matrix(ParamVectors{{-5.0}, {-5.0}, 5.0})(0, 0) ==
        doctest::Approx(4.53978687024343945e-05).epsilon(1e-13));

  CHECK_THROWS_AS(alpha_matrix(ParamVectors{{6.0}, {0.0}, 5.0}), InvalidInput);
  CHECK_THROWS_AS(alpha_matrix(ParamVectors{{0.0}, {0.0}, 0.0}), InvalidInput);
}

TEST_CASE("mixed_product") {
  MixedFactorization f{DenseMatrix::from_rows({{1, 2}}), DenseMatrix::from_rows({{3}, {4}}),
                       ParamVectors{{0.0}, {0.0}, 5.0}};
  CHECK(mixed_product(f)(0, 0) == doctest::Approx(9.5));

  SUBCASE("rank one ignores the parameters") {
    std::mt19937_64 rng(5);
    MixedFactorization g{random_matrix(4, 1, rng), random_matrix(1, 3, rng),
                         ParamVectors{{-1, 2, 0.5, 4}, {3, -3, 0}, 5.0}};
    const DenseMatrix P = mixed_product(g);
    const DenseMatrix S = matmul(g.B, g.C);
    for (std::size_t idx = 0; idx < P.size(); ++idx) {
      CHECK(P.values()[idx] == doctest::Approx(S.values()[idx]).epsilon(1e-15));
    }
  }

  SUBCASE("deep negative gate stays within sigma(-10) of the standard product") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
      MixedFactorization g{random_matrix(5, 3, rng), random_matrix(3, 5, rng),
                           ParamVectors{std::vector<double>(5, -5.0),
                                        std::vector<double>(5, -5.0), 5.0}};
      const DenseMatrix P = mixed_product(g);
      const auto [S, X] = standard_and_maxtimes(g.B, g.C);
      for (std::size_t idx = 0; idx < P.size(); ++idx) {
        const double gap = std::abs(X.values()[idx] - S.values()[idx]);
        CHECK(std::abs(P.values()[idx] - S.values()[idx]) <= 4.6e-5 * gap + 1e-15);
      }
    }
  }

  SUBCASE("standard_only is the plain product") {
    f.standard_only = true;
    CHECK(mixed_product(f)(0, 0) == 11.0);
    CHECK(effective_alpha(f)(0, 0) == 0.0);
  }

  f.params.co = {0.0, 0.0};
  CHECK_THROWS_AS(mixed_product(f), InvalidInput);
}

TEST_CASE("mixed_product_with_alpha endpoints") {
  std::mt19937_64 rng(21);
  const DenseMatrix B = random_matrix(4, 3, rng), C = random_matrix(3, 5, rng);
  CHECK(mixed_product_with_alpha(B, C, DenseMatrix(4, 5, 0.0)) == matmul(B, C));
  CHECK(mixed_product_with_alpha(B, C, DenseMatrix(4, 5, 1.0)) == maxtimes_product(B, C));
  CHECK_THROWS_AS(mixed_product_with_alpha(B, C, DenseMatrix(4, 5, 1.5)), OutOfRange);
  CHECK_THROWS_AS(mixed_product_with_alpha(B, C, DenseMatrix(4, 4, 0.5)), InvalidInput);
}

TEST_CASE("constant_factor_alpha") {
  const DenseMatrix B(2, 4, kHalfRoot3), C(4, 3, kHalfRoot3);

  SUBCASE("bracket endpoints and midpoint") {
    const DenseMatrix A = DenseMatrix::from_rows({{3.0, 0.75, 1.875}, {3.0, 0.75, 1.875}});
    const DenseMatrix alpha = constant_factor_alpha(A, B, C);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(alpha(i, 0) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(alpha(i, 1) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(alpha(i, 2) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  SUBCASE("round trip reproduces any A in [1, 2]") {
    std::mt19937_64 rng(4);
    const DenseMatrix A = random_matrix(2, 3, rng, 1.0, 2.0);
    const DenseMatrix back = mixed_product_with_alpha(B, C, constant_factor_alpha(A, B, C));
    CHECK(frobenius_error(A, back).absolute < 1e-13);
  }

  SUBCASE("degenerate entry names its index") {
    // Row 1 has a single nonzero term, so both products coincide there.
    DenseMatrix Bd = B;
    for (std::size_t s = 1; s < 4; ++s) Bd(1, s) = 0.0;
    const DenseMatrix A(2, 3, 1.5);
    try {
      constant_factor_alpha(A, Bd, C);
      FAIL("expected DegenerateEntry");
    } catch (const DegenerateEntry& e) {
      CHECK(e.row() == 1);
      CHECK(e.col() == 0);
    }
  }

  CHECK_THROWS_AS(constant_factor_alpha(DenseMatrix(2, 3, 3.5), B, C), OutOfRange);
  CHECK_THROWS_AS(constant_factor_alpha(DenseMatrix(2, 3, 0.5), B, C), OutOfRange);
}

TEST_CASE("frobenius_error") {
  const DenseMatrix A = DenseMatrix::from_rows({{3, 4}});
  const ErrorPair same = frobenius_error(A, A);
  CHECK(same.absolute == 0.0);
  CHECK(same.relative == 0.0);
  const ErrorPair e = frobenius_error(A, DenseMatrix(1, 2, 0.0));
  CHECK(e.absolute == doctest::Approx(5.0));
  CHECK(e.relative == doctest::Approx(1.0));

  std::mt19937_64 rng(2);
  const DenseMatrix X = random_matrix(4, 4, rng), Y = random_matrix(4, 4, rng);
  double ss = 0.0, base = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      ss += (X(i, j) - Y(i, j)) * (X(i, j) - Y(i, j));
      base += X(i, j) * X(i, j);
    }
  }
  const ErrorPair r = frobenius_error(X, Y);
  CHECK(r.absolute == doctest::Approx(std::sqrt(ss)).epsilon(1e-14));
  CHECK(r.relative == doctest::Approx(std::sqrt(ss / base)).epsilon(1e-14));

  const DenseMatrix Z(1, 2, 0.0);
  CHECK(frobenius_error(Z, Z).relative == 0.0);
  CHECK_THROWS_AS(frobenius_error(Z, A), InvalidInput);
  CHECK_THROWS_AS(frobenius_error(A, X), InvalidInput);
}

TEST_CASE("product properties on random instances") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = dim(rng), k = dim(rng), m = dim(rng);
    const DenseMatrix B = random_matrix(n, k, rng), C = random_matrix(k, m, rng);
    const DenseMatrix alpha = random_matrix(n, m, rng);
    const auto [S, X] = standard_and_maxtimes(B, C);
    const DenseMatrix P = mixed_product_with_alpha(B, C, alpha);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        // Sandwich.
        CHECK(X(i, j) <= P(i, j) + 1e-15);
        CHECK(P(i, j) <= S(i, j) + 1e-15);
        // Naive oracles.
        CHECK(rel_diff(S(i, j), naive_sum(B, C, i, j)) < 1e-12);
        CHECK(X(i, j) == naive_max(B, C, i, j));
        const double a = alpha(i, j);
        CHECK(rel_diff(P(i, j), a * naive_max(B, C, i, j) + (1 - a) * naive_sum(B, C, i, j)) <
              1e-12);
      }
    }
    // Raising one alpha never raises that entry.
    DenseMatrix bumped = alpha;
    bumped(0, 0) = std::min(1.0, alpha(0, 0) + 0.25);
    CHECK(mixed_product_with_alpha(B, C, bumped)(0, 0) <= P(0, 0) + 1e-15);
  }
}
