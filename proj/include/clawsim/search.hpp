// search.hpp — claw search by interval bisection over one-sided detectors.
//
// Stage 1 halves the larger domain(s) until every searched interval is no
// longer than the smallest one; stage 2 bisects all intervals simultaneously
// down to the final-scan threshold; stage 3 scans the remaining rectangle
// classically. A detector batch at depth s runs s + 1 + ceil(log3 B)
// repetitions, B being the branch count of the stage (2 and 4 for two
// functions), so each stage's total miss probability stays below 1/6 and the
// whole search errs with probability under 1/3. A detector never reports a
// claw where none exists, so non-sentinel outputs always verify.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clawsim/detect.hpp"
#include "clawsim/instance.hpp"
#include "clawsim/rng.hpp"

namespace clawsim {

struct DetectCallRecord {
  int stage = 0;
  std::int64_t depth = 0;
  std::vector<Interval> restriction;
  std::int64_t repetition = 0;
  bool verdict = false;
  std::int64_t queries = 0;
};

using TraceSink = std::function<void(const DetectCallRecord&)>;

// One batch of detector repetitions against one candidate restriction.
struct StageStep {
  int stage = 0;
  std::int64_t depth = 0;
  std::vector<Interval> restriction;
  std::int64_t repetitions = 0;
  std::vector<bool> verdicts;
};

struct SearchConfig {
  DetectBackend backend = DetectBackend::cost_model;
  double error_rate = kDefaultDetectErrorRate;
  double walk_constant = kDefaultWalkConstant;
  std::int64_t final_scan_threshold = 100;
  std::int64_t max_edges = kDefaultEdgeCap;
  bool collect_trace = false;
  TraceSink sink;
};

struct SearchResult {
  ClawTuple claw;
  std::int64_t total_queries = 0;
  std::vector<StageStep> trace;
};

// Classical scan of a small rectangle. Standard mode queries every element
// once; comparison mode sorts the rectangle's elements and reads equal runs.
// Returns the lexicographically least claw, or the sentinel.
inline ClawTuple final_scan(OracleSession& session,
                            std::span<const Interval> rectangle) {
  const ProblemInstance& inst = session.instance();
  const int k = inst.k();
  if (static_cast<int>(rectangle.size()) != k)
    throw std::invalid_argument("final_scan: one interval per function required");

  // per value: per-function minimum position, tracked as fields fill in
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> mins;
  const auto note = [&](std::int64_t value, int f, std::int64_t x) {
    auto [it, fresh] = mins.try_emplace(
        value, std::vector<std::int64_t>(static_cast<std::size_t>(k), -1));
    auto& row = it->second;
    if (row[static_cast<std::size_t>(f)] < 0 || x < row[static_cast<std::size_t>(f)])
      row[static_cast<std::size_t>(f)] = x;
  };

  if (session.mode() == OracleMode::standard) {
    for (int f = 0; f < k; ++f)
      for (std::int64_t x = rectangle[static_cast<std::size_t>(f)].lo;
           x < rectangle[static_cast<std::size_t>(f)].hi; ++x)
        note(session.standard_query({f, x}), f, x);
  } else {
    std::vector<std::vector<std::int64_t>> subsets(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f)
      for (std::int64_t x = rectangle[static_cast<std::size_t>(f)].lo;
           x < rectangle[static_cast<std::size_t>(f)].hi; ++x)
        subsets[static_cast<std::size_t>(f)].push_back(x);
    const SortedListL list = SortedListL::build(session, subsets);
    for (const SortedEntry& e : list.entries()) note(e.value, e.function, e.element);
  }

  ClawTuple best = ClawTuple::none(k);
  for (const auto& [value, row] : mins) {
    bool full = true;
    for (const std::int64_t x : row) full = full && x >= 0;
    if (!full) continue;
    if (!best.found() || std::lexicographical_compare(row.begin(), row.end(),
                                                      best.indices.begin(),
                                                      best.indices.end()))
      best.indices = row;
  }
  return best;
}

// Analytic upper bound on the overall miss probability for the given stage
// depths and branch counts under per-run detector error at most 1/3.
inline double error_budget(std::int64_t depth_stage1, std::int64_t depth_stage2,
                           std::int64_t branches_stage1, std::int64_t branches_stage2) {
  if (depth_stage1 < 0 || depth_stage2 < 0)
    throw std::invalid_argument("error_budget: negative depth");
  if (branches_stage1 < 1 || branches_stage2 < 1)
    throw std::invalid_argument("error_budget: branch counts must be positive");
  const auto stage_bound = [](std::int64_t depth, std::int64_t branches) {
    const std::int64_t offset = 1 + ceil_log3(branches);
    double sum = 0.0;
    for (std::int64_t s = 1; s <= depth; ++s)
      sum += static_cast<double>(branches) *
             std::pow(3.0, -static_cast<double>(s + offset));
    return sum;
  };
  return stage_bound(depth_stage1, branches_stage1) +
         stage_bound(depth_stage2, branches_stage2);
}

namespace detail {

// Candidate halves of an interval under the inclusive-midpoint split rule;
// the interval itself when it is already within the threshold.
inline std::vector<Interval> split_or_keep(const Interval& iv, std::int64_t threshold) {
  if (iv.hi - 1 - iv.lo <= threshold) return {iv};
  const std::int64_t mid = (iv.lo + iv.hi) / 2;  // ceil((lo + hi - 1) / 2)
  return {{iv.lo, mid}, {mid, iv.hi}};
}

struct SearchDriver {
  OracleSession* session;
  const SearchConfig* config;
  SplitMix64* rng;
  const ClawIndex* index;
  std::vector<StageStep>* trace;

  bool run_batch(std::span<const Interval> restriction, std::int64_t reps, int stage,
                 std::int64_t depth) const {
    std::vector<std::int64_t> sizes;
    sizes.reserve(restriction.size());
    for (const Interval& iv : restriction) sizes.push_back(iv.size());
    const DetectParams params = choose_params(sizes, config->walk_constant);
    DetectOptions opts;
    opts.error_rate = config->error_rate;
    opts.max_edges = config->max_edges;
    opts.claw_index = index;

    StageStep step{stage, depth,
                   std::vector<Interval>(restriction.begin(), restriction.end()), reps,
                   {}};
    bool any = false;
    for (std::int64_t r = 0; r < reps; ++r) {
      const DetectOutcome out =
          claw_detect(*session, restriction, params, config->backend, *rng, opts);
      any = any || out.claw_found;
      if (config->collect_trace) step.verdicts.push_back(out.claw_found);
      if (config->sink)
        config->sink(DetectCallRecord{stage, depth, step.restriction, r,
                                      out.claw_found, out.queries_used});
    }
    if (config->collect_trace && trace) trace->push_back(std::move(step));
    return any;
  }
};

}  // namespace detail

// Two-function search: binary search over the larger domain, then 4-ary
// bisection of both, then the classical scan.
inline SearchResult claw_search(OracleSession& session, const SearchConfig& config,
                                SplitMix64& rng, const ClawIndex* index = nullptr) {
  const ProblemInstance& inst = session.instance();
  if (inst.k() != 2)
    throw std::invalid_argument("claw_search: defined for two functions");

  // The cost model resolves ground truth per call; one index serves them all.
  std::optional<ClawIndex> local_index;
  if (config.backend == DetectBackend::cost_model && index == nullptr) {
    local_index.emplace(inst);
    index = &*local_index;
  }

  SearchResult result;
  result.claw = ClawTuple::none(2);
  const std::int64_t start_count = session.query_count();
  detail::SearchDriver driver{&session, &config, &rng, index, &result.trace};

  Interval x{0, inst.domain_size(0)};
  Interval y{0, inst.domain_size(1)};

  // Stage 1: shrink y until its inclusive span is at most |x|.
  for (std::int64_t depth = 1; y.hi - 1 - y.lo > x.size(); ++depth) {
    bool committed = false;
    for (const Interval& half : detail::split_or_keep(y, x.size())) {
      const Interval restriction[] = {x, half};
      if (driver.run_batch(restriction, depth + 2, 1, depth)) {
        y = half;
        committed = true;
        break;
      }
    }
    if (!committed) {
      result.total_queries = session.query_count() - start_count;
      return result;
    }
  }

  // Stage 2: bisect both intervals down to the final-scan threshold.
  const std::int64_t threshold = config.final_scan_threshold;
  for (std::int64_t depth = 1;
       x.hi - 1 - x.lo > threshold || y.hi - 1 - y.lo > threshold; ++depth) {
    bool committed = false;
    for (const Interval& xc : detail::split_or_keep(x, threshold)) {
      for (const Interval& yc : detail::split_or_keep(y, threshold)) {
        const Interval restriction[] = {xc, yc};
        if (driver.run_batch(restriction, depth + 3, 2, depth)) {
          x = xc;
          y = yc;
          committed = true;
          break;
        }
      }
      if (committed) break;
    }
    if (!committed) {
      result.total_queries = session.query_count() - start_count;
      return result;
    }
  }

  const Interval rectangle[] = {x, y};
  result.claw = final_scan(session, rectangle);
  result.total_queries = session.query_count() - start_count;
  return result;
}

// k-function search: 2^(k-1)-ary search over functions 2..k, then 2^k-ary
// search over all, then the classical scan. With k = 2 the repetition counts
// coincide with claw_search's.
inline SearchResult k_claw_search(OracleSession& session, const SearchConfig& config,
                                  SplitMix64& rng, const ClawIndex* index = nullptr) {
  const ProblemInstance& inst = session.instance();
  const int k = inst.k();

  std::optional<ClawIndex> local_index;
  if (config.backend == DetectBackend::cost_model && index == nullptr) {
    local_index.emplace(inst);
    index = &*local_index;
  }

  SearchResult result;
  result.claw = ClawTuple::none(k);
  const std::int64_t start_count = session.query_count();
  detail::SearchDriver driver{&session, &config, &rng, index, &result.trace};

  std::vector<Interval> cur = inst.full_domains();

  // Iterate candidate tuples in lexicographic order over the per-function
  // candidate lists; returns true when a batch accepted a tuple.
  const auto sweep = [&](const std::vector<std::vector<Interval>>& choices,
                         std::int64_t reps, int stage, std::int64_t depth) {
    std::vector<std::size_t> pick(choices.size(), 0);
    for (;;) {
      std::vector<Interval> candidate(choices.size());
      for (std::size_t i = 0; i < choices.size(); ++i)
        candidate[i] = choices[i][pick[i]];
      if (driver.run_batch(candidate, reps, stage, depth)) {
        cur = candidate;
        return true;
      }
      std::size_t i = choices.size();
      while (i > 0) {
        --i;
        if (++pick[i] < choices[i].size()) break;
        pick[i] = 0;
        if (i == 0) return false;
      }
    }
  };

  // Stage 1: shrink functions 2..k until their inclusive spans are at most
  // |X_1|; the first function's interval never splits here.
  const std::int64_t first_size = cur[0].size();
  const auto stage1_pending = [&] {
    for (int f = 1; f < k; ++f)
      if (cur[static_cast<std::size_t>(f)].hi - 1 - cur[static_cast<std::size_t>(f)].lo >
          first_size)
        return true;
    return false;
  };
  const std::int64_t reps1_offset = 1 + ceil_log3(std::int64_t{1} << (k - 1));
  for (std::int64_t depth = 1; stage1_pending(); ++depth) {
    std::vector<std::vector<Interval>> choices(static_cast<std::size_t>(k));
    choices[0] = {cur[0]};
    for (int f = 1; f < k; ++f)
      choices[static_cast<std::size_t>(f)] =
          detail::split_or_keep(cur[static_cast<std::size_t>(f)], first_size);
    if (!sweep(choices, depth + reps1_offset, 1, depth)) {
      result.total_queries = session.query_count() - start_count;
      return result;
    }
  }

  // Stage 2: bisect every function down to the final-scan threshold.
  const std::int64_t threshold = config.final_scan_threshold;
  const auto stage2_pending = [&] {
    for (const Interval& iv : cur)
      if (iv.hi - 1 - iv.lo > threshold) return true;
    return false;
  };
  const std::int64_t reps2_offset = 1 + ceil_log3(std::int64_t{1} << k);
  for (std::int64_t depth = 1; stage2_pending(); ++depth) {
    std::vector<std::vector<Interval>> choices(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f)
      choices[static_cast<std::size_t>(f)] =
          detail::split_or_keep(cur[static_cast<std::size_t>(f)], threshold);
    if (!sweep(choices, depth + reps2_offset, 2, depth)) {
      result.total_queries = session.query_count() - start_count;
      return result;
    }
  }

  result.claw = final_scan(session, cur);
  result.total_queries = session.query_count() - start_count;
  return result;
}

}  // namespace clawsim
