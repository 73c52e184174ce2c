#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "clawsim/clawsim.hpp"

using namespace clawsim;

namespace {

ScalingRow synthetic_row(std::vector<std::int64_t> sizes, double mean) {
  ScalingRow row;
  row.sizes = std::move(sizes);
  row.trials = 1;
  row.mean_queries = mean;
  return row;
}

}  // namespace

TEST_CASE("exponent fit recovers synthetic power laws") {
  SUBCASE("cube root of the size product") {
    std::vector<ScalingRow> rows;
    for (int j = 6; j <= 14; ++j) {
      const std::int64_t n = std::int64_t{1} << j;
      rows.push_back(synthetic_row({n, n}, std::cbrt(static_cast<double>(n) * n)));
    }
    const FitResult fit = fit_exponent(rows, ScalingAxis::domain_product);
    CHECK(std::abs(fit.slope - 1.0 / 3.0) < 1e-6);
    for (const double r : fit.residuals) CHECK(std::abs(r) < 1e-9);
  }
  SUBCASE("square root of the largest domain") {
    std::vector<ScalingRow> rows;
    for (int j = 3; j <= 7; ++j) {
      const std::int64_t n = std::int64_t{1} << j;
      rows.push_back(synthetic_row({n, n * n * n},
                                   std::sqrt(static_cast<double>(n) * n * n)));
    }
    const FitResult fit = fit_exponent(rows, ScalingAxis::largest_domain);
    CHECK(std::abs(fit.slope - 0.5) < 1e-6);
  }
  SUBCASE("narrow spans are rejected") {
    std::vector<ScalingRow> rows;
    for (const std::int64_t n : {64, 80, 96, 128})
      rows.push_back(synthetic_row({n, n}, static_cast<double>(n)));
    CHECK_THROWS_AS(fit_exponent(rows, ScalingAxis::domain_product), FitError);
  }
  SUBCASE("too few rows are rejected") {
    std::vector<ScalingRow> rows;
    for (const std::int64_t n : {16, 256, 4096})
      rows.push_back(synthetic_row({n, n}, static_cast<double>(n)));
    CHECK_THROWS_AS(fit_exponent(rows, ScalingAxis::domain_product), FitError);
  }
}

TEST_CASE("binomial upper confidence bound") {
  CHECK(binomial_upper_confidence(0, 100, 0.99) == doctest::Approx(0.045).epsilon(0.05));
  CHECK(binomial_upper_confidence(100, 100, 0.99) == 1.0);
  CHECK(binomial_upper_confidence(10, 100, 0.99) >
        binomial_upper_confidence(5, 100, 0.99));
  // the bound really covers: upper(f, n) > f/n
  CHECK(binomial_upper_confidence(250, 1000, 0.99) > 0.25);
  CHECK_THROWS_AS(binomial_upper_confidence(-1, 10, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(binomial_upper_confidence(1, 0, 0.99), std::invalid_argument);
}

TEST_CASE("error-rate estimation") {
  SUBCASE("perfect detection never fails") {
    ExperimentConfig cfg;
    cfg.grid = {{64, 64}};
    cfg.trials = 200;
    cfg.seed = 11;
    cfg.error_rate = 0.0;
    cfg.final_scan_threshold = 4;
    const ErrorStats stats = estimate_error_rate(cfg);
    CHECK(stats.failures == 0);
    CHECK(stats.rate == 0.0);
    CHECK(stats.soundness_violations == 0);
  }
  SUBCASE("no-claw instances always return the sentinel") {
    ExperimentConfig cfg;
    cfg.grid = {{64, 64}};
    cfg.trials = 200;
    cfg.seed = 12;
    cfg.num_claws = 0;
    cfg.final_scan_threshold = 4;
    const ErrorStats stats = estimate_error_rate(cfg);
    CHECK(stats.sentinel_count == stats.trials);
    CHECK(stats.failures == 0);
    CHECK(stats.soundness_violations == 0);
  }
  SUBCASE("noisy detection stays under the budget") {
    ExperimentConfig cfg;
    cfg.grid = {{128, 128}};
    cfg.trials = 1200;
    cfg.seed = 13;
    cfg.final_scan_threshold = 4;
    const ErrorStats stats = estimate_error_rate(cfg);
    CHECK(stats.soundness_violations == 0);
    CHECK(stats.upper_bound <= 1.0 / 3.0);
  }
}

TEST_CASE("scaling runs are deterministic and sound") {
  ExperimentConfig cfg;
  for (int j = 5; j <= 9; ++j)
    cfg.grid.push_back({std::int64_t{1} << j, std::int64_t{1} << j});
  cfg.trials = 6;
  cfg.seed = 99;
  cfg.final_scan_threshold = 4;

  const std::vector<ScalingRow> first = run_scaling_experiment(cfg);
  const std::vector<ScalingRow> second = run_scaling_experiment(cfg);

  std::ostringstream csv1, csv2;
  write_scaling_csv(csv1, first);
  write_scaling_csv(csv2, second);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().starts_with("k,sizes,trials,mean_queries"));

  SUBCASE("different seeds change the bytes") {
    ExperimentConfig other = cfg;
    other.seed = 100;
    std::ostringstream csv3;
    write_scaling_csv(csv3, run_scaling_experiment(other));
    CHECK(csv1.str() != csv3.str());
  }
  SUBCASE("means grow with the size product") {
    for (std::size_t i = 1; i < first.size(); ++i)
      CHECK(first[i].mean_queries > first[i - 1].mean_queries);
  }
}

TEST_CASE("comparison-mode scaling is costlier by a bounded factor") {
  ExperimentConfig cfg;
  cfg.grid = {{256, 256}};
  cfg.trials = 8;
  cfg.seed = 21;
  cfg.final_scan_threshold = 2;
  const double std_mean = run_scaling_experiment(cfg).front().mean_queries;
  cfg.mode = OracleMode::comparison;
  const double cmp_mean = run_scaling_experiment(cfg).front().mean_queries;

  const DetectParams full = choose_params(std::vector<std::int64_t>{256, 256});
  const double bound =
      2.0 * static_cast<double>(ceil_log2(full.subset_sizes[0] + full.subset_sizes[1]));
  CHECK(cmp_mean / std_mean >= 1.0);
  CHECK(cmp_mean / std_mean <= bound);
}
