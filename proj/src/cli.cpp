#include "latitude/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "latitude/baselines.hpp"
#include "latitude/bench.hpp"
#include "latitude/csv_io.hpp"
#include "latitude/errors.hpp"
#include "latitude/preprocess.hpp"
#include "latitude/solver.hpp"
#include "latitude/sweep.hpp"
#include "latitude/synth.hpp"

namespace latitude {

namespace {

// Rejected flag combinations that parse fine but make no sense.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FactorizeOptions {
  std::string input;
  std::string out_prefix;
  std::size_t k = 10;
  std::size_t niter = 40;
  double M = 5.0;
  std::uint64_t seed = 0;
  std::string init = "nmf";
  std::string preprocess = "none";
  std::size_t nmf_iterations = 100;
  int threads = 1;
};

struct SynthOptions {
  std::string mode = "mixed";
  std::size_t n = 200;
  std::size_t m = 160;
  std::size_t k = 10;
  double density = 0.2;
  double noise = 0.01;
  double param_range = 5.0;
  std::uint64_t seed = 0;
  std::string out_prefix;
};

struct EvalOptions {
  std::string axis = "noise";
  std::vector<double> values;
  std::string methods = "latitude,nmf,svd";
  std::size_t repeats = 10;
  std::string out;
  std::string summary;
  std::string mode = "mixed";
  std::size_t n = 200;
  std::size_t m = 160;
  std::size_t k = 5;
  std::size_t fit_k = 0;
  double density = 0.2;
  double noise = 0.01;
  double param_range = 5.0;
  std::size_t niter = 40;
  double M = 5.0;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct BenchOptions {
  std::vector<std::size_t> sizes{250, 500, 1000};
  std::size_t m = 200;
  std::size_t k = 10;
  std::size_t niter = 3;
  std::uint64_t seed = 0;
  std::string out;
};

std::string path_with(const std::string& prefix, const std::string& suffix) {
  return prefix + suffix;
}

int run_factorize(const FactorizeOptions& o, std::ostream& out) {
  if (o.init != "nmf" && o.init != "random") {
    throw UsageError("--init must be nmf or random");
  }
  const PreprocessSpec pre = parse_preprocess(o.preprocess);
  const DenseMatrix A = preprocess(load_csv(o.input), pre);

  SolverConfig cfg;
  cfg.k = o.k;
  cfg.niter = o.niter;
  cfg.M = o.M;
  cfg.seed = o.seed;
  cfg.init_mode = o.init == "nmf" ? InitMode::nmf : InitMode::random;
  cfg.nmf_config.max_iterations = o.nmf_iterations;
  cfg.threads = o.threads;

  const FitResult fit = latitude_fit(A, cfg);
  const MixedFactorization& f = fit.factorization;
  const ErrorPair e = frobenius_error(A, mixed_product(f));

  save_csv(path_with(o.out_prefix, ".B.csv"), f.B);
  save_csv(path_with(o.out_prefix, ".C.csv"), f.C);
  if (f.standard_only) {
    // The plain-product state is the co = ro = -inf limit.
    const double inf = std::numeric_limits<double>::infinity();
    save_vector_csv(path_with(o.out_prefix, ".co.csv"),
                    std::vector<double>(f.B.rows(), -inf));
    save_vector_csv(path_with(o.out_prefix, ".ro.csv"),
                    std::vector<double>(f.C.cols(), -inf));
  } else {
    save_vector_csv(path_with(o.out_prefix, ".co.csv"), f.params.co);
    save_vector_csv(path_with(o.out_prefix, ".ro.csv"), f.params.ro);
  }
  save_csv(path_with(o.out_prefix, ".alpha.csv"), effective_alpha(f));

  nlohmann::ordered_json report;
  report["k"] = o.k;
  report["niter"] = o.niter;
  report["M"] = o.M;
  report["seed"] = o.seed;
  report["init_mode"] = o.init;
  report["abs_error"] = e.absolute;
  report["rel_error"] = e.relative;
  report["best_error"] = fit.report.best_error;
  report["best_iteration"] = fit.report.best_iteration;
  report["standard_only"] = f.standard_only;
  report["initial_error"] = fit.report.initial_error;
  report["init_nmf_error"] = fit.report.init_nmf_error;
  report["init_mixed_error"] = fit.report.init_mixed_error;
  report["error_trace"] = fit.report.error_trace;
  report["seconds_per_iteration"] = fit.report.wall_time_per_iteration;
  std::ofstream rep(path_with(o.out_prefix, ".report.json"));
  if (!rep) throw InvalidInput("cannot write report for prefix '" + o.out_prefix + "'");
  rep << report.dump(2) << '\n';

  out << "rank " << o.k << ": abs_error " << format_double(e.absolute)
      << ", rel_error " << format_double(e.relative) << " (best iteration "
      << fit.report.best_iteration << " of " << o.niter << ")\n";
  return kExitOk;
}

int run_synth(const SynthOptions& o, std::ostream& out) {
  SynthSpec spec;
  spec.n = o.n;
  spec.m = o.m;
  spec.k_true = o.k;
  spec.density = o.density;
  spec.noise_sigma = o.noise;
  spec.param_range = o.param_range;
  spec.seed = o.seed;
  try {
    spec.mode = parse_synth_mode(o.mode);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const PlantedData data = gen_planted(spec);
  save_csv(path_with(o.out_prefix, ".clean.csv"), data.clean);
  save_csv(path_with(o.out_prefix, ".noisy.csv"), data.noisy);
  save_csv(path_with(o.out_prefix, ".truth.B.csv"), data.truth.B);
  save_csv(path_with(o.out_prefix, ".truth.C.csv"), data.truth.C);
  save_vector_csv(path_with(o.out_prefix, ".truth.co.csv"), data.truth.params.co);
  save_vector_csv(path_with(o.out_prefix, ".truth.ro.csv"), data.truth.params.ro);
  out << "wrote " << to_string(spec.mode) << " data " << o.n << "x" << o.m
      << " to " << o.out_prefix << ".*.csv\n";
  return kExitOk;
}

int run_eval(const EvalOptions& o, std::ostream& out) {
  SweepConfig cfg;
  try {
    cfg.axis = parse_sweep_axis(o.axis);
    cfg.methods = parse_method_list(o.methods);
    cfg.base.mode = parse_synth_mode(o.mode);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  if (o.values.empty()) throw UsageError("--values needs at least one value");
  cfg.values = o.values;
  cfg.repeats = o.repeats;
  cfg.base.n = o.n;
  cfg.base.m = o.m;
  cfg.base.k_true = o.k;
  cfg.base.density = o.density;
  cfg.base.noise_sigma = o.noise;
  cfg.base.param_range = o.param_range;
  cfg.base.seed = o.seed;
  if (o.fit_k > 0) cfg.fit_rank = o.fit_k;
  cfg.solver.niter = o.niter;
  cfg.solver.M = o.M;
  cfg.solver.seed = o.seed;
  cfg.cell_threads = o.threads;

  const bool truncated = std::find(cfg.methods.begin(), cfg.methods.end(),
                                   Method::lattrunc) != cfg.methods.end();
  if (truncated) {
    if (cfg.axis == SweepAxis::rank) {
      if (std::any_of(o.values.begin(), o.values.end(),
                      [](double v) { return v < 2.0; })) {
        throw UsageError("lattrunc needs k >= 2");
      }
    } else if (cfg.fit_rank.value_or(o.k) < 2) {
      throw UsageError("lattrunc needs k >= 2");
    }
  }

  const std::vector<SweepRow> rows = sweep(cfg);
  std::ofstream file(o.out);
  if (!file) throw InvalidInput("cannot write '" + o.out + "'");
  write_sweep_csv(file, rows);
  const std::vector<SweepSummary> summary = summarize(rows);
  if (!o.summary.empty()) {
    std::ofstream sfile(o.summary);
    if (!sfile) throw InvalidInput("cannot write '" + o.summary + "'");
    write_summary_csv(sfile, summary);
  }
  write_summary_csv(out, summary);
  return kExitOk;
}

int run_bench_command(const BenchOptions& o, std::ostream& out) {
  const std::vector<BenchRow> rows = run_bench(o.sizes, o.m, o.k, o.niter, o.seed);
  std::ofstream file(o.out);
  if (!file) throw InvalidInput("cannot write '" + o.out + "'");
  write_bench_csv(file, rows);
  write_bench_csv(out, rows);
  if (rows.size() >= 2) {
    out << "log-log slope of seconds per iteration vs n: "
        << format_double(loglog_slope(rows)) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Mixed linear/max-times matrix factorization", "latitude"};
  app.require_subcommand(1);

  FactorizeOptions fo;
  auto* factorize = app.add_subcommand("factorize", "Fit the mixed model to a CSV matrix");
  factorize->add_option("--input", fo.input, "Input CSV")->required();
  factorize->add_option("--out-prefix", fo.out_prefix, "Prefix for output files")->required();
  factorize->add_option("--k", fo.k, "Rank")->check(CLI::PositiveNumber);
  factorize->add_option("--niter", fo.niter, "Outer iterations")->check(CLI::PositiveNumber);
  factorize->add_option("--M", fo.M, "Parameter bound")->check(CLI::PositiveNumber);
  factorize->add_option("--seed", fo.seed, "Random seed");
  factorize->add_option("--init", fo.init, "nmf or random");
  factorize->add_option("--preprocess", fo.preprocess,
                        "Comma list of meancenter, minsub, stddiv, stddiv-sample");
  factorize->add_option("--nmf-iter", fo.nmf_iterations, "NMF initializer iterations")
      ->check(CLI::PositiveNumber);
  factorize->add_option("--threads", fo.threads, "Threads for the column/row sweeps")
      ->check(CLI::PositiveNumber);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Generate planted synthetic data");
  synth->add_option("--mode", so.mode, "mixed, pure-subtropical, pure-nmf or alpha-nmf");
  synth->add_option("--n", so.n, "Rows")->check(CLI::PositiveNumber);
  synth->add_option("--m", so.m, "Columns")->check(CLI::PositiveNumber);
  synth->add_option("--k", so.k, "Planted rank")->check(CLI::PositiveNumber);
  synth->add_option("--density", so.density, "Factor density in (0, 1]");
  synth->add_option("--noise", so.noise, "Gaussian noise standard deviation");
  synth->add_option("--param-range", so.param_range, "Parameter half-width");
  synth->add_option("--seed", so.seed, "Random seed");
  synth->add_option("--out-prefix", so.out_prefix, "Prefix for output files")->required();

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Sweep synthetic experiments across methods");
  eval->add_option("--axis", eo.axis, "noise, density or rank");
  eval->add_option("--values", eo.values, "Comma list of axis values")
      ->required()
      ->delimiter(',');
  eval->add_option("--methods", eo.methods, "Comma list of latitude, lattrunc, nmf, svd");
  eval->add_option("--repeats", eo.repeats, "Random matrices per value")
      ->check(CLI::PositiveNumber);
  eval->add_option("--out", eo.out, "Result CSV")->required();
  eval->add_option("--summary", eo.summary, "Optional per-cell summary CSV");
  eval->add_option("--mode", eo.mode, "Synthetic structure");
  eval->add_option("--n", eo.n, "Rows")->check(CLI::PositiveNumber);
  eval->add_option("--m", eo.m, "Columns")->check(CLI::PositiveNumber);
  eval->add_option("--k", eo.k, "Planted rank")->check(CLI::PositiveNumber);
  eval->add_option("--fit-k", eo.fit_k, "Fitting rank (default: planted rank)");
  eval->add_option("--density", eo.density, "Factor density");
  eval->add_option("--noise", eo.noise, "Noise standard deviation");
  eval->add_option("--param-range", eo.param_range, "Parameter half-width");
  eval->add_option("--niter", eo.niter, "Solver outer iterations")->check(CLI::PositiveNumber);
  eval->add_option("--M", eo.M, "Parameter bound")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eo.seed, "Base seed");
  eval->add_option("--threads", eo.threads, "Cells run in parallel")->check(CLI::PositiveNumber);

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Time solver iterations against n");
  bench->add_option("--sizes", bo.sizes, "Comma list of row counts")->delimiter(',');
  bench->add_option("--m", bo.m, "Columns")->check(CLI::PositiveNumber);
  bench->add_option("--k", bo.k, "Rank")->check(CLI::PositiveNumber);
  bench->add_option("--niter", bo.niter, "Timed iterations per size")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bo.seed, "Random seed");
  bench->add_option("--out", bo.out, "Timing CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*factorize) return run_factorize(fo, out);
    if (*synth) return run_synth(so, out);
    if (*eval) return run_eval(eo, out);
    if (*bench) return run_bench_command(bo, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InvalidInput& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace latitude
