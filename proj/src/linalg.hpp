#pragma once

// Small dense kernels shared by the solvers. Not part of the public API.

#include <cstddef>
#include <span>
#include <vector>

#include "latitude/matrix.hpp"

namespace latitude::linalg {

/// Solves G x = rhs in place for a symmetric p x p matrix G (row-major).
/// Returns false, leaving rhs unspecified, when G is not numerically
/// positive definite.
bool cholesky_solve(std::span<const double> G, std::size_t p,
                    std::span<double> rhs);

/// Minimum-norm solution of G x = rhs for symmetric positive semidefinite G,
/// via a cyclic Jacobi eigendecomposition. Eigenvalues below
/// p * eps * max_eigenvalue are treated as zero.
std::vector<double> least_norm_solve(std::span<const double> G, std::size_t p,
                                     std::span<const double> rhs);

/// Cholesky first, falling back to the least-norm solve.
std::vector<double> spd_solve(std::span<const double> G, std::size_t p,
                              std::span<const double> rhs);

struct Svd {
  std::vector<double> singular_values;  // descending
  DenseMatrix U;                        // n x r, orthonormal columns
  DenseMatrix V;                        // m x r, orthonormal columns
};

/// Thin SVD by one-sided (Hestenes) Jacobi rotations; r = min(n, m).
Svd jacobi_svd(const DenseMatrix& A);

}  // namespace latitude::linalg
