#include "latitude/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "latitude/errors.hpp"

namespace latitude {

void SynthSpec::validate() const {
  if (n == 0 || m == 0 || k_true == 0) {
    throw InvalidInput("synthetic dimensions must be positive");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw InvalidInput("density must lie in (0, 1]");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidInput("noise sigma must be >= 0");
  }
  if (!(param_range > 0.0) || !std::isfinite(param_range)) {
    throw InvalidInput("param range must be positive");
  }
}

PlantedData gen_planted(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::bernoulli_distribution keep(spec.density);

  auto sparse_factor = [&](std::size_t rows, std::size_t cols) {
    DenseMatrix F(rows, cols);
    for (double& v : F.values()) {
      const bool nonzero = keep(rng);
      const double x = unif(rng);
      v = nonzero ? x : 0.0;
    }
    return F;
  };

  DenseMatrix B = sparse_factor(spec.n, spec.k_true);
  DenseMatrix C = sparse_factor(spec.k_true, spec.m);

  std::uniform_real_distribution<double> param(-spec.param_range, spec.param_range);
  ParamVectors params;
  params.M = spec.param_range;
  params.co.resize(spec.n);
  params.ro.resize(spec.m);
  for (double& v : params.co) v = param(rng);
  for (double& v : params.ro) v = param(rng);

  MixedFactorization truth{std::move(B), std::move(C), std::move(params)};

  DenseMatrix clean;
  switch (spec.mode) {
    case SynthMode::mixed:
      clean = mixed_product(truth);
      break;
    case SynthMode::pure_subtropical:
      clean = maxtimes_product(truth.B, truth.C);
      break;
    case SynthMode::pure_nmf:
      clean = matmul(truth.B, truth.C);
      break;
    case SynthMode::alpha_scaled_nmf_only: {
      clean = matmul(truth.B, truth.C);
      const DenseMatrix alpha = alpha_matrix(truth.params);
      auto cv = clean.values();
      auto av = alpha.values();
      for (std::size_t idx = 0; idx < cv.size(); ++idx) cv[idx] *= 1.0 - av[idx];
      break;
    }
  }

  DenseMatrix noisy = clean;
  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : noisy.values()) v = std::max(0.0, v + noise(rng));
  }
  return PlantedData{std::move(clean), std::move(noisy), std::move(truth)};
}

SynthMode parse_synth_mode(std::string_view name) {
  if (name == "mixed") return SynthMode::mixed;
  if (name == "pure-subtropical" || name == "pure_subtropical") {
    return SynthMode::pure_subtropical;
  }
  if (name == "pure-nmf" || name == "pure_nmf") return SynthMode::pure_nmf;
  if (name == "alpha-nmf" || name == "alpha_scaled_nmf_only") {
    return SynthMode::alpha_scaled_nmf_only;
  }
  throw InvalidInput("unknown synthetic mode '" + std::string(name) + "'");
}

std::string to_string(SynthMode mode) {
  switch (mode) {
    case SynthMode::mixed:
      return "mixed";
    case SynthMode::pure_subtropical:
      return "pure-subtropical";
    case SynthMode::pure_nmf:
      return "pure-nmf";
    case SynthMode::alpha_scaled_nmf_only:
      return "alpha-nmf";
  }
  return "mixed";
}

}  // namespace latitude
