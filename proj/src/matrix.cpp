#include "latitude/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "latitude/errors.hpp"

namespace latitude {

namespace {

void require_nonempty(const DenseMatrix& X, const char* name) {
  if (X.empty()) {
    throw InvalidInput(std::string(name) + " is empty");
  }
}

void require_inner_dims(const DenseMatrix& B, const DenseMatrix& C) {
  require_nonempty(B, "B");
  require_nonempty(C, "C");
  if (B.cols() != C.rows()) {
    throw InvalidInput("dimension mismatch: B is " + std::to_string(B.rows()) +
                       "x" + std::to_string(B.cols()) + ", C is " +
                       std::to_string(C.rows()) + "x" +
                       std::to_string(C.cols()));
  }
}

void require_nonnegative(const DenseMatrix& X, const char* name) {
  if (!X.is_nonnegative()) {
    throw InvalidInput(std::string(name) + " has negative entries");
  }
}

void require_same_shape(const DenseMatrix& X, const DenseMatrix& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw InvalidInput("shape mismatch: " + std::to_string(X.rows()) + "x" +
                       std::to_string(X.cols()) + " vs " +
                       std::to_string(Y.rows()) + "x" +
                       std::to_string(Y.cols()));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
  if (rows == 0 || cols == 0) {
    throw InvalidInput("matrix dimensions must be positive");
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw InvalidInput("matrix dimensions must be positive");
  }
  if (values_.size() != rows * cols) {
    throw InvalidInput("value count " + std::to_string(values_.size()) +
                       " does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
  }
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) throw InvalidInput("matrix dimensions must be positive");
  const std::size_t cols = rows.begin()->size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidInput("ragged initializer rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return DenseMatrix(rows.size(), cols, std::move(values));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void DenseMatrix::set_column(std::size_t j, std::span<const double> v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix T(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
  }
  return T;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool DenseMatrix::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v >= 0.0; });
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void ParamVectors::validate() const {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw InvalidInput("parameter bound M must be positive and finite");
  }
  auto in_range = [this](double v) { return v >= -M && v <= M; };
  if (!std::all_of(co.begin(), co.end(), in_range) ||
      !std::all_of(ro.begin(), ro.end(), in_range)) {
    throw InvalidInput("parameter vector entry outside [-M, M]");
  }
}

void MixedFactorization::validate() const {
  require_inner_dims(B, C);
  if (params.co.size() != B.rows() || params.ro.size() != C.cols()) {
    throw InvalidInput("parameter vector lengths do not match factor shapes");
  }
  params.validate();
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

DenseMatrix matmul(const DenseMatrix& B, const DenseMatrix& C) {
  require_inner_dims(B, C);
  const std::size_t n = B.rows(), k = B.cols(), m = C.cols();
  DenseMatrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto orow = out.row(i);
    for (std::size_t s = 0; s < k; ++s) {
      const double b = B(i, s);
      auto crow = C.row(s);
      for (std::size_t j = 0; j < m; ++j) orow[j] += b * crow[j];
    }
  }
  return out;
}

DenseMatrix maxtimes_product(const DenseMatrix& B, const DenseMatrix& C) {
  require_inner_dims(B, C);
  require_nonnegative(B, "B");
  require_nonnegative(C, "C");
  const std::size_t n = B.rows(), k = B.cols(), m = C.cols();
  DenseMatrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    auto orow = out.row(i);
    for (std::size_t s = 0; s < k; ++s) {
      const double b = B(i, s);
      auto crow = C.row(s);
      for (std::size_t j = 0; j < m; ++j) orow[j] = std::max(orow[j], b * crow[j]);
    }
  }
  return out;
}

ProductPair standard_and_maxtimes(const DenseMatrix& B, const DenseMatrix& C) {
  require_inner_dims(B, C);
  require_nonnegative(B, "B");
  require_nonnegative(C, "C");
  const std::size_t n = B.rows(), k = B.cols(), m = C.cols();
  ProductPair out{DenseMatrix(n, m), DenseMatrix(n, m)};
  for (std::size_t i = 0; i < n; ++i) {
    auto srow = out.standard.row(i);
    auto mrow = out.maxtimes.row(i);
    for (std::size_t s = 0; s < k; ++s) {
      const double b = B(i, s);
      auto crow = C.row(s);
      for (std::size_t j = 0; j < m; ++j) {
        const double p = b * crow[j];
        srow[j] += p;
        mrow[j] = std::max(mrow[j], p);
      }
    }
  }
  return out;
}

DenseMatrix alpha_matrix(const ParamVectors& params) {
  params.validate();
  if (params.co.empty() || params.ro.empty()) {
    throw InvalidInput("parameter vectors must be nonempty");
  }
  DenseMatrix alpha(params.co.size(), params.ro.size());
  for (std::size_t i = 0; i < alpha.rows(); ++i) {
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      alpha(i, j) = sigmoid(params.co[i] + params.ro[j]);
    }
  }
  return alpha;
}

DenseMatrix effective_alpha(const MixedFactorization& fact) {
  fact.validate();
  if (fact.standard_only) return DenseMatrix(fact.B.rows(), fact.C.cols(), 0.0);
  return alpha_matrix(fact.params);
}

DenseMatrix mixed_product(const MixedFactorization& fact) {
  fact.validate();
  if (fact.standard_only) {
    require_nonnegative(fact.B, "B");
    require_nonnegative(fact.C, "C");
    return matmul(fact.B, fact.C);
  }
  return mixed_product_with_alpha(fact.B, fact.C, alpha_matrix(fact.params));
}

DenseMatrix mixed_product_with_alpha(const DenseMatrix& B, const DenseMatrix& C,
                                     const DenseMatrix& alpha) {
  auto [standard, maxtimes] = standard_and_maxtimes(B, C);
  require_same_shape(standard, alpha);
  for (double a : alpha.values()) {
    if (!(a >= 0.0 && a <= 1.0)) throw OutOfRange("alpha entry outside [0, 1]");
  }
  DenseMatrix out = std::move(standard);
  auto ov = out.values();
  auto mv = maxtimes.values();
  auto av = alpha.values();
  for (std::size_t idx = 0; idx < ov.size(); ++idx) {
    // The clamp only absorbs rounding: the exact value already lies between.
    ov[idx] = std::clamp(av[idx] * mv[idx] + (1.0 - av[idx]) * ov[idx], mv[idx], ov[idx]);
  }
  return out;
}

DenseMatrix constant_factor_alpha(const DenseMatrix& A, const DenseMatrix& B,
                                  const DenseMatrix& C) {
  auto [standard, maxtimes] = standard_and_maxtimes(B, C);
  require_same_shape(A, standard);
  DenseMatrix alpha(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const double lo = maxtimes(i, j), hi = standard(i, j);
      if (lo == hi) throw DegenerateEntry(i, j);
      // Entries on the bracket may miss it by rounding in the products.
      const double slack = 64.0 * std::numeric_limits<double>::epsilon() * hi;
      if (A(i, j) < lo - slack || A(i, j) > hi + slack) {
        throw OutOfRange("A(" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside [max-times, standard] bracket");
      }
      alpha(i, j) = std::clamp((A(i, j) - hi) / (lo - hi), 0.0, 1.0);
    }
  }
  return alpha;
}

ErrorPair frobenius_error(const DenseMatrix& A, const DenseMatrix& Ahat) {
  require_nonempty(A, "A");
  require_same_shape(A, Ahat);
  double diff = 0.0, base = 0.0;
  auto av = A.values();
  auto hv = Ahat.values();
  for (std::size_t idx = 0; idx < av.size(); ++idx) {
    const double d = av[idx] - hv[idx];
    diff += d * d;
    base += av[idx] * av[idx];
  }
  ErrorPair e;
  e.absolute = std::sqrt(diff);
  if (base > 0.0) {
    e.relative = e.absolute / std::sqrt(base);
  } else if (e.absolute > 0.0) {
    throw InvalidInput("relative error undefined: reference matrix is zero");
  }
  return e;
}

}  // namespace latitude
