// harness.hpp — experiment driver: planted-instance Monte Carlo runs, query
// scaling with exponent fits, and error-rate estimation.
//
// Determinism contract: a config plus seed fixes every byte of the CSV.
// Per-trial generators derive from (seed, point, trial), so trials are
// order-independent; wall time is recorded on the row but never written to
// the CSV.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clawsim/detect.hpp"
#include "clawsim/errors.hpp"
#include "clawsim/instance.hpp"
#include "clawsim/rng.hpp"
#include "clawsim/search.hpp"

namespace clawsim {

struct ExperimentConfig {
  std::vector<std::vector<std::int64_t>> grid;  // one size tuple per point
  std::int64_t trials = 30;
  std::uint64_t seed = 1;
  OracleMode mode = OracleMode::standard;
  DetectBackend backend = DetectBackend::cost_model;
  double error_rate = kDefaultDetectErrorRate;
  double walk_constant = kDefaultWalkConstant;
  std::int64_t final_scan_threshold = 100;
  std::int64_t num_claws = 1;
  std::int64_t range_factor = 2;  // |Z| = range_factor * sum of domain sizes

  void validate() const {
    if (grid.empty()) throw std::invalid_argument("experiment: empty grid");
    if (trials < 1) throw std::invalid_argument("experiment: need at least one trial");
  }
};

struct ScalingRow {
  std::vector<std::int64_t> sizes;
  std::int64_t trials = 0;
  double mean_queries = 0.0;
  double stddev_queries = 0.0;
  double failure_rate = 0.0;
  double wall_ms = 0.0;  // informational only; excluded from CSV
};

namespace detail {

struct TrialResult {
  std::int64_t queries = 0;
  bool failed = false;     // claw existed but the sentinel came back
  bool unsound = false;    // non-sentinel output that does not verify
  bool sentinel = false;
};

inline TrialResult run_search_trial(const ExperimentConfig& config,
                                    std::span<const std::int64_t> sizes,
                                    std::size_t point, std::int64_t trial) {
  SplitMix64 gen = derive_stream(config.seed, point, static_cast<std::uint64_t>(trial), 1);
  SplitMix64 run = derive_stream(config.seed, point, static_cast<std::uint64_t>(trial), 2);

  std::int64_t total = 0;
  for (const std::int64_t n : sizes) total += n;
  const ProblemInstance inst = make_planted_instance(
      {sizes.begin(), sizes.end()}, config.num_claws,
      std::max<std::int64_t>(config.range_factor, 1) * total, gen());

  OracleSession session(inst, config.mode);
  const ClawIndex index(inst);

  SearchConfig sc;
  sc.backend = config.backend;
  sc.error_rate = config.error_rate;
  sc.walk_constant = config.walk_constant;
  sc.final_scan_threshold = config.final_scan_threshold;

  const SearchResult res = inst.k() == 2 ? claw_search(session, sc, run, &index)
                                         : k_claw_search(session, sc, run, &index);

  TrialResult out;
  out.queries = res.total_queries;
  out.sentinel = !res.claw.found();
  if (res.claw.found())
    out.unsound = !res.claw.verifies(inst);
  else
    out.failed = config.num_claws > 0;
  if (res.total_queries != session.query_count())
    out.unsound = true;  // accounting drift counts as a soundness violation
  return out;
}

}  // namespace detail

// Query statistics per grid point over fresh planted instances.
inline std::vector<ScalingRow> run_scaling_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ScalingRow> rows;
  rows.reserve(config.grid.size());
  for (std::size_t point = 0; point < config.grid.size(); ++point) {
    const auto& sizes = config.grid[point];
    const auto started = std::chrono::steady_clock::now();
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t failures = 0;
    for (std::int64_t trial = 0; trial < config.trials; ++trial) {
      const detail::TrialResult r =
          detail::run_search_trial(config, sizes, point, trial);
      if (r.unsound)
        throw std::logic_error("scaling experiment: unsound search output");
      const double q = static_cast<double>(r.queries);
      sum += q;
      sum_sq += q * q;
      failures += r.failed ? 1 : 0;
    }
    const double n = static_cast<double>(config.trials);
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    const auto elapsed = std::chrono::steady_clock::now() - started;
    rows.push_back(ScalingRow{
        sizes, config.trials, mean, std::sqrt(var),
        static_cast<double>(failures) / n,
        std::chrono::duration<double, std::milli>(elapsed).count()});
  }
  return rows;
}

// CSV with fixed formatting; wall time deliberately left out so identical
// configs produce identical bytes.
inline void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows) {
  os << "k,sizes,trials,mean_queries,stddev_queries,failure_rate\n";
  char buf[128];
  for (const ScalingRow& row : rows) {
    os << row.sizes.size() << ',';
    for (std::size_t i = 0; i < row.sizes.size(); ++i) {
      if (i) os << ':';
      os << row.sizes[i];
    }
    std::snprintf(buf, sizeof buf, ",%lld,%.6f,%.6f,%.6f",
                  static_cast<long long>(row.trials), row.mean_queries,
                  row.stddev_queries, row.failure_rate);
    os << buf << '\n';
  }
}

// One-sided Clopper–Pearson upper confidence bound for a binomial rate.
inline double binomial_upper_confidence(std::int64_t failures, std::int64_t trials,
                                        double confidence) {
  if (trials < 1) throw std::invalid_argument("binomial bound: need trials >= 1");
  if (failures < 0 || failures > trials)
    throw std::invalid_argument("binomial bound: failures outside [0, trials]");
  if (confidence <= 0.0 || confidence >= 1.0)
    throw std::invalid_argument("binomial bound: confidence must be in (0, 1)");
  if (failures == trials) return 1.0;

  const double alpha = 1.0 - confidence;
  const auto cdf = [&](double p) {
    // P(X <= failures) with X ~ Binomial(trials, p), in log space
    double total = 0.0;
    for (std::int64_t i = 0; i <= failures; ++i) {
      const double lg = std::lgamma(static_cast<double>(trials) + 1.0) -
                        std::lgamma(static_cast<double>(i) + 1.0) -
                        std::lgamma(static_cast<double>(trials - i) + 1.0) +
                        static_cast<double>(i) * std::log(p) +
                        static_cast<double>(trials - i) * std::log1p(-p);
      total += std::exp(lg);
    }
    return total;
  };

  double lo = static_cast<double>(failures) / static_cast<double>(trials);
  double hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || mid >= 1.0) break;
    if (cdf(mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

struct ErrorStats {
  std::int64_t trials = 0;
  std::int64_t failures = 0;       // claw existed, sentinel returned
  std::int64_t sentinel_count = 0;
  std::int64_t soundness_violations = 0;
  double rate = 0.0;
  double upper_bound = 1.0;
  double confidence = 0.99;
};

// Failure-rate estimate over the first grid point.
inline ErrorStats estimate_error_rate(const ExperimentConfig& config,
                                      double confidence = 0.99) {
  config.validate();
  const auto& sizes = config.grid.front();
  ErrorStats stats;
  stats.trials = config.trials;
  stats.confidence = confidence;
  for (std::int64_t trial = 0; trial < config.trials; ++trial) {
    const detail::TrialResult r = detail::run_search_trial(config, sizes, 0, trial);
    stats.failures += r.failed ? 1 : 0;
    stats.sentinel_count += r.sentinel ? 1 : 0;
    stats.soundness_violations += r.unsound ? 1 : 0;
  }
  stats.rate = static_cast<double>(stats.failures) / static_cast<double>(stats.trials);
  stats.upper_bound = binomial_upper_confidence(stats.failures, stats.trials, confidence);
  return stats;
}

// ── Exponent fitting ─────────────────────────────────────────────────────────

enum class ScalingAxis { domain_product, largest_domain };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

// Ordinary least squares of log mean queries against the log size axis. In
// comparison mode the log2 of the smallest domain is divided out first.
inline FitResult fit_exponent(std::span<const ScalingRow> rows, ScalingAxis axis,
                              OracleMode mode = OracleMode::standard) {
  if (rows.size() < 4) throw FitError("fit_exponent: need at least 4 rows");

  std::vector<double> xs, ys;
  double min_axis = 0.0, max_axis = 0.0;
  for (const ScalingRow& row : rows) {
    double axis_value = 1.0;
    double smallest = static_cast<double>(row.sizes.front());
    double largest = 0.0;
    for (const std::int64_t n : row.sizes) {
      axis_value *= static_cast<double>(n);
      smallest = std::min(smallest, static_cast<double>(n));
      largest = std::max(largest, static_cast<double>(n));
    }
    if (axis == ScalingAxis::largest_domain) axis_value = largest;
    double queries = row.mean_queries;
    if (mode == OracleMode::comparison) queries /= std::log2(std::max(2.0, smallest));
    if (queries <= 0.0) throw FitError("fit_exponent: non-positive mean queries");
    xs.push_back(std::log(axis_value));
    ys.push_back(std::log(queries));
    min_axis = min_axis == 0.0 ? axis_value : std::min(min_axis, axis_value);
    max_axis = std::max(max_axis, axis_value);
  }
  if (max_axis < 100.0 * min_axis)
    throw FitError("fit_exponent: size axis must span at least two decades");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw FitError("fit_exponent: degenerate size axis");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residuals.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
  return fit;
}

}  // namespace clawsim
