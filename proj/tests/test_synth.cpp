#include <doctest.h>

#include <cmath>
#include <sstream>

#include "latitude/errors.hpp"
#include "latitude/sweep.hpp"
#include "latitude/synth.hpp"

using namespace latitude;

namespace {

SynthSpec small_spec(SynthMode mode, std::uint64_t seed) {
  SynthSpec s;
  s.n = 30;
  s.m = 25;
  s.k_true = 4;
  s.density = 0.5;
  s.mode = mode;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("gen_planted is deterministic in the seed") {
  const SynthSpec s = small_spec(SynthMode::mixed, 4);
  const PlantedData a = gen_planted(s), b = gen_planted(s);
  CHECK(a.noisy == b.noisy);
  CHECK(a.truth.params.co == b.truth.params.co);
  SynthSpec t = s;
  t.seed = 5;
  CHECK_FALSE(gen_planted(t).noisy == a.noisy);
}

TEST_CASE("gen_planted modes") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthSpec s = small_spec(SynthMode::mixed, seed);
    s.noise_sigma = 0.0;
    const PlantedData mixed = gen_planted(s);
    CHECK(mixed.noisy == mixed.clean);
    CHECK(mixed.clean == mixed_product(mixed.truth));
    const auto [S, X] = standard_and_maxtimes(mixed.truth.B, mixed.truth.C);
    for (std::size_t idx = 0; idx < S.size(); ++idx) {
      CHECK(mixed.clean.values()[idx] <= S.values()[idx] * (1 + 1e-14));
      CHECK(mixed.clean.values()[idx] >= X.values()[idx] * (1 - 1e-14));
    }

    // The mode changes only the final combination, not the factors.
    s.mode = SynthMode::pure_subtropical;
    const PlantedData sub = gen_planted(s);
    CHECK(sub.truth.B == mixed.truth.B);
    CHECK(sub.clean == X);
    s.mode = SynthMode::pure_nmf;
    CHECK(gen_planted(s).clean == S);
    s.mode = SynthMode::alpha_scaled_nmf_only;
    const DenseMatrix scaled = gen_planted(s).clean;
    const DenseMatrix alpha = alpha_matrix(mixed.truth.params);
    for (std::size_t idx = 0; idx < S.size(); ++idx) {
      CHECK(scaled.values()[idx] ==
            doctest::Approx((1.0 - alpha.values()[idx]) * S.values()[idx]).epsilon(1e-14));
    }
  }
}

TEST_CASE("gen_planted rank one is an outer product") {
  SynthSpec s = small_spec(SynthMode::mixed, 9);
  s.k_true = 1;
  s.noise_sigma = 0.0;
  s.density = 1.0;
  const PlantedData d = gen_planted(s);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = 0; j < s.m; ++j) {
      CHECK(d.clean(i, j) == doctest::Approx(d.truth.B(i, 0) * d.truth.C(0, j)).epsilon(1e-15));
    }
  }
}

TEST_CASE("gen_planted noise is truncated at zero") {
  SynthSpec s = small_spec(SynthMode::mixed, 2);
  s.noise_sigma = 0.5;
  const PlantedData d = gen_planted(s);
  CHECK(d.noisy.is_nonnegative());
  bool moved = false;
  for (std::size_t idx = 0; idx < d.noisy.size(); ++idx) {
    moved = moved || d.noisy.values()[idx] != d.clean.values()[idx];
  }
  CHECK(moved);
}

TEST_CASE("gen_planted density") {
  SynthSpec s;
  s.n = 2000;
  s.m = 1500;
  s.k_true = 10;
  s.density = 0.2;
  s.seed = 13;
  const PlantedData d = gen_planted(s);
  std::size_t nz = 0;
  for (double v : d.truth.B.values()) nz += v > 0.0;
  for (double v : d.truth.C.values()) nz += v > 0.0;
  const double total = static_cast<double>(d.truth.B.size() + d.truth.C.size());
  const double sd = std::sqrt(0.2 * 0.8 / total);
  CHECK(std::abs(static_cast<double>(nz) / total - 0.2) < 3.0 * sd);
  for (double v : d.truth.params.co) CHECK(std::abs(v) <= 5.0);
}

TEST_CASE("gen_planted validation and mode names") {
  SynthSpec s;
  s.density = 0.0;
  CHECK_THROWS_AS(gen_planted(s), InvalidInput);
  s.density = 0.2;
  s.k_true = 0;
  CHECK_THROWS_AS(gen_planted(s), InvalidInput);
  s.k_true = 2;
  s.noise_sigma = -1.0;
  CHECK_THROWS_AS(gen_planted(s), InvalidInput);

  for (SynthMode m : {SynthMode::mixed, SynthMode::pure_subtropical, SynthMode::pure_nmf,
                      SynthMode::alpha_scaled_nmf_only}) {
    CHECK(parse_synth_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_synth_mode("tropical"), InvalidInput);
}

TEST_CASE("sweep") {
  SweepConfig cfg;
  cfg.base = small_spec(SynthMode::mixed, 0);
  cfg.axis = SweepAxis::noise;
  cfg.values = {0.0, 0.05};
  cfg.methods = {Method::nmf, Method::svd};
  cfg.repeats = 2;
  cfg.fit_rank = 3;
  cfg.solver.nmf_config.max_iterations = 20;

  const std::vector<SweepRow> rows = sweep(cfg);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].axis_value == 0.0);
  CHECK(rows[0].repeat == 0);
  CHECK(rows[0].method == "nmf");
  CHECK(rows[1].method == "svd");
  CHECK(rows[7].axis_value == 0.05);
  CHECK(rows[7].repeat == 1);
  for (const SweepRow& r : rows) CHECK(r.rel_error >= 0.0);

  const std::vector<SweepSummary> sum = summarize(rows);
  REQUIRE(sum.size() == 4);
  CHECK(sum[0].count == 2);
  CHECK(sum[0].mean_rel == doctest::Approx((rows[0].rel_error + rows[2].rel_error) / 2));
  CHECK(sum[0].std_rel == doctest::Approx(std::abs(rows[0].rel_error - rows[2].rel_error) / 2));

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  CHECK(csv.str().rfind("axis_value,repeat,method,abs_error,rel_error,seconds\n", 0) == 0);

  SUBCASE("cell threads do not change errors") {
    SweepConfig par = cfg;
    par.cell_threads = 3;
    const std::vector<SweepRow> again = sweep(par);
    REQUIRE(again.size() == rows.size());
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
      CHECK(again[idx].abs_error == rows[idx].abs_error);
    }
  }

  SUBCASE("degenerate configurations") {
    SweepConfig bad = cfg;
    bad.values.clear();
    CHECK_THROWS_AS(sweep(bad), InvalidInput);
    bad = cfg;
    bad.repeats = 0;
    CHECK_THROWS_AS(sweep(bad), InvalidInput);
    bad = cfg;
    bad.methods.clear();
    CHECK_THROWS_AS(sweep(bad), InvalidInput);
    bad = cfg;
    bad.axis = SweepAxis::rank;
    bad.values = {2.5};
    CHECK_THROWS_AS(sweep(bad), InvalidInput);
    bad = cfg;
    bad.methods = {Method::lattrunc};
    bad.fit_rank = 1;
    CHECK_THROWS_AS(sweep(bad), InvalidInput);
  }

  CHECK(parse_sweep_axis("density") == SweepAxis::density);
  CHECK_THROWS_AS(parse_sweep_axis("size"), InvalidInput);
}
