#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latitude/matrix.hpp"
#include "latitude/solver.hpp"

namespace latitude {

enum class Method { latitude, lattrunc, nmf, svd };

Method parse_method(std::string_view name);
std::string to_string(Method method);
/// Parses a comma-separated list such as "latitude,nmf,svd".
std::vector<Method> parse_method_list(std::string_view list);

struct MethodResult {
  std::string method;
  std::size_t k = 0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double wall_seconds = 0.0;
};

/// Error of the best rank-k approximation (sum of the discarded squared
/// singular values), relative to ||A||_F.
ErrorPair truncated_svd_error(const DenseMatrix& A, std::size_t k);

/// The best rank-k approximation itself, U_k S_k V_k^T.
DenseMatrix truncated_svd_approximation(const DenseMatrix& A, std::size_t k);

/// Fits each method on `input` at rank k and scores it against `target`.
/// NMF uses solver.nmf_config with solver.seed, i.e. exactly the
/// factorization latitude starts from. lattrunc is latitude at rank k - 1.
std::vector<MethodResult> run_methods(const DenseMatrix& target,
                                      const DenseMatrix& input, std::size_t k,
                                      std::span<const Method> methods,
                                      const SolverConfig& solver);

}  // namespace latitude
