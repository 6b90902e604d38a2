#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace latitude {

/// Dense row-major matrix of doubles. Every constructed matrix has at least
/// one row and one column; a default-constructed matrix is the empty 0x0
/// placeholder and is rejected by every operation.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> values() & { return values_; }
  std::span<const double> values() const& { return values_; }
  std::span<const double> values() && = delete;

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  DenseMatrix transpose() const;

  bool all_finite() const;
  bool is_nonnegative() const;
  double frobenius_norm() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Row and column parameters of the sigmoid gate, each confined to [-M, M].
struct ParamVectors {
  std::vector<double> co;
  std::vector<double> ro;
  double M = 5.0;

  /// Throws InvalidInput if M <= 0 or any entry lies outside [-M, M].
  void validate() const;
};

/// B (n x k), C (k x m) and the gate parameters of a mixed linear/max-times
/// model.
struct MixedFactorization {
  DenseMatrix B;
  DenseMatrix C;
  ParamVectors params;
  /// alpha is identically 0 (the co + ro -> -inf limit), so the model is the
  /// plain product BC. params are carried along but not used.
  bool standard_only = false;

  std::size_t rank() const { return B.cols(); }
  void validate() const;
};

struct ErrorPair {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Both products of the same factors, computed in one pass.
struct ProductPair {
  DenseMatrix standard;  // BC
  DenseMatrix maxtimes;  // B max-times C
};

double sigmoid(double x);

DenseMatrix matmul(const DenseMatrix& B, const DenseMatrix& C);
DenseMatrix maxtimes_product(const DenseMatrix& B, const DenseMatrix& C);
ProductPair standard_and_maxtimes(const DenseMatrix& B, const DenseMatrix& C);

/// alpha_ij = sigmoid(co_i + ro_j).
DenseMatrix alpha_matrix(const ParamVectors& params);

/// alpha_matrix(fact.params), or all zeros when fact.standard_only is set.
DenseMatrix effective_alpha(const MixedFactorization& fact);

/// alpha .* (B max-times C) + (1 - alpha) .* BC with alpha from the params,
/// or BC when fact.standard_only is set.
DenseMatrix mixed_product(const MixedFactorization& fact);
DenseMatrix mixed_product_with_alpha(const DenseMatrix& B, const DenseMatrix& C,
                                     const DenseMatrix& alpha);

/// The per-entry alpha that makes the mixed product reproduce A exactly.
/// Requires A_ij to lie between (B max-times C)_ij and (BC)_ij and the two
/// products to differ at every entry.
DenseMatrix constant_factor_alpha(const DenseMatrix& A, const DenseMatrix& B,
                                  const DenseMatrix& C);

/// absolute = ||A - Ahat||_F, relative = absolute / ||A||_F.
ErrorPair frobenius_error(const DenseMatrix& A, const DenseMatrix& Ahat);

}  // namespace latitude
