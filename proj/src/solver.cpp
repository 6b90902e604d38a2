#include "latitude/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "latitude/errors.hpp"

namespace latitude {

namespace {

struct ColumnProducts {
  std::vector<double> maxtimes;  // (B max-times c)_i
  std::vector<double> standard;  // (Bc)_i
};

ColumnProducts column_products(const DenseMatrix& B, std::span<const double> c) {
  const std::size_t n = B.rows(), k = B.cols();
  ColumnProducts p{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    auto row = B.row(i);
    double mx = 0.0, sm = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      const double v = row[s] * c[s];
      sm += v;
      mx = std::max(mx, v);
    }
    p.maxtimes[i] = mx;
    p.standard[i] = sm;
  }
  return p;
}

double error_from_products(std::span<const double> a, const ColumnProducts& p,
                           std::span<const double> co, double t) {
  double rss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double alpha = sigmoid(co[i] + t);
    const double pred = std::clamp(alpha * p.maxtimes[i] + (1.0 - alpha) * p.standard[i],
                                   p.maxtimes[i], p.standard[i]);
    rss += (a[i] - pred) * (a[i] - pred);
  }
  return std::sqrt(rss);
}

// d/dt of the squared column error.
double error_derivative(std::span<const double> a, const ColumnProducts& p,
                        std::span<const double> co, double t) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double alpha = sigmoid(co[i] + t);
    const double gap = p.maxtimes[i] - p.standard[i];
    const double pred = p.standard[i] + alpha * gap;
    d += 2.0 * (pred - a[i]) * alpha * (1.0 - alpha) * gap;
  }
  return d;
}

double mixed_error(const DenseMatrix& A, const MixedFactorization& f) {
  return frobenius_error(A, mixed_product(f)).absolute;
}

void check_column_inputs(std::span<const double> a, const DenseMatrix& B,
                         std::span<const double> c, std::span<const double> co) {
  if (B.empty()) throw InvalidInput("coefficient source matrix is empty");
  if (a.size() != B.rows() || co.size() != B.rows() || c.size() != B.cols()) {
    throw InvalidInput("column subproblem dimensions disagree");
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (k == 0) throw InvalidInput("rank k must be >= 1");
  if (niter == 0) throw InvalidInput("niter must be >= 1");
  if (!(M > 0.0) || !std::isfinite(M)) throw InvalidInput("M must be positive");
  if (bisect_iterations == 0) throw InvalidInput("bisect_iterations must be >= 1");
  if (threads < 1) throw InvalidInput("threads must be >= 1");
}

ParamVectors init_parameters(const DenseMatrix& A, const DenseMatrix& B,
                             const DenseMatrix& C, double M) {
  const DenseMatrix BC = matmul(B, C);
  if (BC.rows() != A.rows() || BC.cols() != A.cols()) {
    throw InvalidInput("factor shapes do not match the input");
  }
  const std::size_t n = A.rows(), m = A.cols();
  if (n < 2 || m < 2) {
    throw InvalidInput("parameter initialization needs at least 2 rows and 2 columns");
  }
  if (!(M > 0.0)) throw InvalidInput("M must be positive");

  std::vector<double> f(n, 0.0), g(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = BC(i, j) - A(i, j);
      f[i] += d;
      g[j] += d;
    }
  }

  auto ranked = [M](const std::vector<double>& sums) {
    const std::size_t len = sums.size();
    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sums[x] < sums[y]; });
    std::vector<double> out(len);
    const double denom = static_cast<double>(len - 1);
    for (std::size_t pos = 0; pos < len; ++pos) {
      // pos is 0-based, so (pos + 1 - len) / (len - 1) runs from -1 to 0.
      out[order[pos]] =
          (static_cast<double>(pos) + 1.0 - static_cast<double>(len)) / denom * M;
    }
    return out;
  };

  ParamVectors params;
  params.co = ranked(f);
  params.ro = ranked(g);
  params.M = M;
  return params;
}

DenseMatrix build_coefficient_matrix(const DenseMatrix& B,
                                     std::span<const double> c,
                                     std::span<const double> alpha) {
  if (B.empty() || c.size() != B.cols() || alpha.size() != B.rows()) {
    throw InvalidInput("coefficient matrix dimensions disagree");
  }
  const std::size_t n = B.rows(), k = B.cols();
  DenseMatrix Y(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    auto brow = B.row(i);
    std::size_t winner = 0;
    double best = brow[0] * c[0];
    for (std::size_t s = 1; s < k; ++s) {
      const double v = brow[s] * c[s];
      if (v > best) {
        best = v;
        winner = s;
      }
    }
    auto yrow = Y.row(i);
    const double scale = 1.0 - alpha[i];
    for (std::size_t s = 0; s < k; ++s) {
      yrow[s] = s == winner ? brow[s] : brow[s] * scale;
    }
  }
  return Y;
}

double column_error(std::span<const double> a, const DenseMatrix& B,
                    std::span<const double> c, std::span<const double> co,
                    double t) {
  check_column_inputs(a, B, c, co);
  return error_from_products(a, column_products(B, c), co, t);
}

double update_t(std::span<const double> a, const DenseMatrix& B,
                std::span<const double> c, std::span<const double> co,
                double M, double t_in, std::size_t bisect_iterations) {
  check_column_inputs(a, B, c, co);
  const ColumnProducts p = column_products(B, c);

  double best_t = std::clamp(t_in, -M, M);
  double best_err = error_from_products(a, p, co, best_t);
  auto consider = [&](double t) {
    const double e = error_from_products(a, p, co, t);
    if (e < best_err) {
      best_err = e;
      best_t = t;
    }
  };

  double lo = -M, hi = M;
  if (error_derivative(a, p, co, lo) < 0.0 && error_derivative(a, p, co, hi) > 0.0) {
    for (std::size_t it = 0; it < bisect_iterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (error_derivative(a, p, co, mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    consider(0.5 * (lo + hi));
  }
  consider(-M);
  consider(M);
  return best_t;
}

MixRegressionResult solve_mix_regression(std::span<const double> a,
                                         const DenseMatrix& B,
                                         std::span<const double> c0,
                                         std::span<const double> co, double t0,
                                         double M, const NnlsConfig& nnls_config,
                                         std::size_t bisect_iterations) {
  check_column_inputs(a, B, c0, co);
  const std::size_t n = B.rows();
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = sigmoid(co[i] + t0);

  const DenseMatrix Y = build_coefficient_matrix(B, c0, alpha);
  MixRegressionResult out;
  out.c = nnls_solve(Y, a, nnls_config).x;
  out.t = update_t(a, B, out.c, co, M, t0, bisect_iterations);

  if (column_error(a, B, c0, co, t0) < column_error(a, B, out.c, co, out.t)) {
    out.c.assign(c0.begin(), c0.end());
    out.t = t0;
  }
  return out;
}

FitResult latitude_fit(const DenseMatrix& A, const SolverConfig& config) {
  config.validate();
  if (A.empty()) throw InvalidInput("input matrix is empty");
  if (config.init_mode == InitMode::random) {
    return latitude_fit_from(
        A, random_factors(A.rows(), A.cols(), config.k, config.seed), config);
  }
  NmfConfig nmf = config.nmf_config;
  nmf.k = config.k;
  nmf.seed = config.seed;
  if (!A.all_finite() || !A.is_nonnegative()) {
    throw InvalidInput("input must be finite and nonnegative");
  }
  NmfResult init = nmf_fit(A, nmf);
  return latitude_fit_from(A, FactorPair{std::move(init.B), std::move(init.C)},
                           config);
}

FitResult latitude_fit_from(const DenseMatrix& A, FactorPair initial,
                            const SolverConfig& config) {
  config.validate();
  if (A.empty()) throw InvalidInput("input matrix is empty");
  if (!A.all_finite()) throw InvalidInput("input has non-finite entries");
  if (!A.is_nonnegative()) throw InvalidInput("input has negative entries");
  const std::size_t n = A.rows(), m = A.cols();
  if (n < 2 || m < 2) {
    throw InvalidInput("input needs at least 2 rows and 2 columns");
  }
  if (initial.B.rows() != n || initial.C.cols() != m ||
      initial.B.cols() != initial.C.rows()) {
    throw InvalidInput("initial factors do not match the input shape");
  }
  if (!initial.B.is_nonnegative() || !initial.C.is_nonnegative()) {
    throw InvalidInput("initial factors must be nonnegative");
  }

  const double M = config.M;
  MixedFactorization state{std::move(initial.B), std::move(initial.C),
                           ParamVectors{}};
  state.params = init_parameters(A, state.B, state.C, M);

  FitResult result;
  FitReport& report = result.report;
  report.init_nmf_error = frobenius_error(A, matmul(state.B, state.C)).absolute;
  report.init_mixed_error = mixed_error(A, state);
  report.initial_error = std::min(report.init_nmf_error, report.init_mixed_error);
  report.best_error = report.initial_error;
  report.best_iteration = 0;
  result.factorization = state;
  result.factorization.standard_only =
      report.init_nmf_error < report.init_mixed_error;

  const DenseMatrix At = A.transpose();
  const int threads = config.threads;

  for (std::size_t iter = 1; iter <= config.niter; ++iter) {
    const auto start = std::chrono::steady_clock::now();

    // Columns of C and entries of ro; B and co are frozen.
    {
      const DenseMatrix& B = state.B;
      const std::vector<double>& co = state.params.co;
      DenseMatrix& C = state.C;
      std::vector<double>& ro = state.params.ro;
#pragma omp parallel for num_threads(threads) schedule(static)
      for (std::size_t j = 0; j < m; ++j) {
        const std::vector<double> c0 = C.column(j);
        MixRegressionResult r = solve_mix_regression(
            At.row(j), B, c0, co, ro[j], M, config.nnls_config, config.bisect_iterations);
        C.set_column(j, r.c);
        ro[j] = r.t;
      }
    }

    // Rows of B and entries of co; C and ro are frozen.
    {
      const DenseMatrix Ct = state.C.transpose();
      const std::vector<double>& ro = state.params.ro;
      DenseMatrix& B = state.B;
      std::vector<double>& co = state.params.co;
#pragma omp parallel for num_threads(threads) schedule(static)
      for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> b0(B.row(i).begin(), B.row(i).end());
        MixRegressionResult r = solve_mix_regression(
            A.row(i), Ct, b0, ro, co[i], M, config.nnls_config,
            config.bisect_iterations);
        std::copy(r.c.begin(), r.c.end(), B.row(i).begin());
        co[i] = r.t;
      }
    }

    const double err = mixed_error(A, state);
    const auto stop = std::chrono::steady_clock::now();
    report.error_trace.push_back(err);
    report.wall_time_per_iteration.push_back(
        std::chrono::duration<double>(stop - start).count());
    if (err < report.best_error) {
      report.best_error = err;
      report.best_iteration = iter;
      result.factorization = state;
    }
  }
  return result;
}

}  // namespace latitude
