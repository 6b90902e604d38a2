#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "latitude/matrix.hpp"

namespace latitude {

enum class SynthMode { mixed, pure_subtropical, pure_nmf, alpha_scaled_nmf_only };

struct SynthSpec {
  std::size_t n = 1000;
  std::size_t m = 800;
  std::size_t k_true = 10;
  double density = 0.2;
  double noise_sigma = 0.01;
  double param_range = 5.0;
  SynthMode mode = SynthMode::mixed;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedData {
  DenseMatrix clean;
  DenseMatrix noisy;
  MixedFactorization truth;
};

/// Factor entries are zero with probability 1 - density, else uniform on
/// [0, 1]. Parameters are uniform on [-param_range, param_range] and are
/// drawn in every mode so the random stream does not depend on it. Noise is
/// i.i.d. Gaussian, then truncated at zero.
PlantedData gen_planted(const SynthSpec& spec);

SynthMode parse_synth_mode(std::string_view name);
std::string to_string(SynthMode mode);

}  // namespace latitude
