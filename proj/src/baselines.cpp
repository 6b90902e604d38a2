#include "latitude/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "latitude/errors.hpp"
#include "latitude/nmf.hpp"
#include "linalg.hpp"

namespace latitude {

namespace {

void check_rank(const DenseMatrix& A, std::size_t k) {
  if (A.empty()) throw InvalidInput("matrix is empty");
  if (k == 0 || k > std::min(A.rows(), A.cols())) {
    throw InvalidInput("rank " + std::to_string(k) + " outside [1, min(n, m)]");
  }
}

}  // namespace

Method parse_method(std::string_view name) {
  if (name == "latitude") return Method::latitude;
  if (name == "lattrunc") return Method::lattrunc;
  if (name == "nmf") return Method::nmf;
  if (name == "svd") return Method::svd;
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::latitude:
      return "latitude";
    case Method::lattrunc:
      return "lattrunc";
    case Method::nmf:
      return "nmf";
    case Method::svd:
      return "svd";
  }
  return "latitude";
}

std::vector<Method> parse_method_list(std::string_view list) {
  std::vector<Method> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const std::string_view item = list.substr(0, comma);
    if (!item.empty()) out.push_back(parse_method(item));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw InvalidInput("empty method list");
  return out;
}

ErrorPair truncated_svd_error(const DenseMatrix& A, std::size_t k) {
  check_rank(A, k);
  if (!A.all_finite()) throw InvalidInput("matrix has non-finite entries");
  const linalg::Svd svd = linalg::jacobi_svd(A);
  double tail = 0.0, total = 0.0;
  // Sum smallest first.
  for (std::size_t r = svd.singular_values.size(); r-- > 0;) {
    const double s2 = svd.singular_values[r] * svd.singular_values[r];
    if (r >= k) tail += s2;
    total += s2;
  }
  ErrorPair e;
  e.absolute = std::sqrt(tail);
  e.relative = total > 0.0 ? e.absolute / std::sqrt(total) : 0.0;
  return e;
}

DenseMatrix truncated_svd_approximation(const DenseMatrix& A, std::size_t k) {
  check_rank(A, k);
  if (!A.all_finite()) throw InvalidInput("matrix has non-finite entries");
  const linalg::Svd svd = linalg::jacobi_svd(A);
  DenseMatrix out(A.rows(), A.cols());
  for (std::size_t r = 0; r < k; ++r) {
    const double s = svd.singular_values[r];
    for (std::size_t i = 0; i < A.rows(); ++i) {
      const double u = s * svd.U(i, r);
      auto orow = out.row(i);
      for (std::size_t j = 0; j < A.cols(); ++j) orow[j] += u * svd.V(j, r);
    }
  }
  return out;
}

std::vector<MethodResult> run_methods(const DenseMatrix& target,
                                      const DenseMatrix& input, std::size_t k,
                                      std::span<const Method> methods,
                                      const SolverConfig& solver) {
  if (target.rows() != input.rows() || target.cols() != input.cols()) {
    throw InvalidInput("evaluation target and input differ in shape");
  }
  for (Method method : methods) {
    if (method == Method::lattrunc && k < 2) {
      throw InvalidInput("lattrunc needs k >= 2");
    }
  }

  std::vector<MethodResult> results;
  for (Method method : methods) {
    const auto start = std::chrono::steady_clock::now();
    MethodResult r;
    r.method = to_string(method);
    r.k = method == Method::lattrunc ? k - 1 : k;
    DenseMatrix approx;
    switch (method) {
      case Method::svd:
        approx = truncated_svd_approximation(input, k);
        break;
      case Method::nmf: {
        NmfConfig cfg = solver.nmf_config;
        cfg.k = k;
        cfg.seed = solver.seed;
        const NmfResult fit = nmf_fit(input, cfg);
        approx = matmul(fit.B, fit.C);
        break;
      }
      case Method::latitude:
      case Method::lattrunc: {
        SolverConfig cfg = solver;
        cfg.k = r.k;
        approx = mixed_product(latitude_fit(input, cfg).factorization);
        break;
      }
    }
    const ErrorPair e = frobenius_error(target, approx);
    r.abs_error = e.absolute;
    r.rel_error = e.relative;
    r.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace latitude
