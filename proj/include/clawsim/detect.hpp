// detect.hpp — claw / k-claw / (p,q)-subset detection over a walked product
// chain, with exact and cost-model backends and bit-exact query accounting.
//
// Parameter selection: all subset sizes share one value l. For two functions
// of sizes N <= M, l = clamp(ceil((NM)^{1/3}), 2, N) while M < N^2, and l = N
// otherwise (the smaller factor then carries its whole domain and is frozen).
// For k functions the same pattern uses the (k+1)-th root of the size product
// and the regime test prod_{i>=2} N_i <= N_1^k. The marked-fraction bound is
// prod l/N_i, the gap bound 1/l over walked factors, and the step bound
// ceil(c / sqrt(eps * delta)) for a calibrated constant c.
//
// Query accounting (explicit constants; S = sum of subset sizes):
//   setup        C_U = S (standard) or S * ceil(log2 S) (comparison)
//   marked check C_F = 0 (read off the sorted list)
//   per sub-step C_W = 2k (standard) or 2k * ceil(log2 S) (comparison)
//   total        C_U + T * (C_F + 2 * C_W)
// The cost model charges exactly the total; the exact backend performs the
// real list operations (initial sort, then incremental updates along a
// classical shadow path) and is therefore never charged more than the model.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clawsim/combinatorics.hpp"
#include "clawsim/errors.hpp"
#include "clawsim/instance.hpp"
#include "clawsim/johnson.hpp"
#include "clawsim/rng.hpp"
#include "clawsim/walk.hpp"

namespace clawsim {

// Calibrated on the tiny single-claw family; see calibrate_walk_constant.
inline constexpr double kDefaultWalkConstant = 1.0;
inline constexpr double kDefaultDetectErrorRate = 1.0 / 3.0;

enum class DetectBackend { exact, cost_model };

inline const char* to_string(DetectBackend b) {
  return b == DetectBackend::exact ? "exact" : "cost-model";
}

struct DetectParams {
  std::vector<std::int64_t> subset_sizes;  // one entry per function
  double marked_fraction_bound = 1.0;      // lower bound when a claw exists
  double gap_bound = 1.0;                  // spectral-gap lower bound
  std::int64_t step_bound = 1;             // walk-length bound
  double walk_constant = kDefaultWalkConstant;
};

// Derived quantities for explicitly chosen subset sizes.
inline DetectParams make_detect_params(std::span<const std::int64_t> domain_sizes,
                                       std::span<const std::int64_t> subset_sizes,
                                       double walk_constant = kDefaultWalkConstant) {
  if (domain_sizes.size() != subset_sizes.size() || domain_sizes.size() < 2)
    throw std::invalid_argument("make_detect_params: need matching sizes, k >= 2");
  DetectParams p;
  p.walk_constant = walk_constant;
  p.subset_sizes.assign(subset_sizes.begin(), subset_sizes.end());
  double eps = 1.0;
  std::int64_t max_walked = 0;
  for (std::size_t i = 0; i < domain_sizes.size(); ++i) {
    const std::int64_t n = domain_sizes[i];
    const std::int64_t l = subset_sizes[i];
    if (l < 1 || l > n)
      throw std::invalid_argument("make_detect_params: subset size outside [1, N]");
    eps *= static_cast<double>(l) / static_cast<double>(n);
    if (l < n) max_walked = std::max(max_walked, l);
  }
  p.marked_fraction_bound = eps;
  p.gap_bound = max_walked > 0 ? 1.0 / static_cast<double>(max_walked) : 1.0;
  p.step_bound = static_cast<std::int64_t>(
      std::ceil(walk_constant / std::sqrt(eps * p.gap_bound)));
  p.step_bound = std::max<std::int64_t>(p.step_bound, 1);
  return p;
}

// Subset-size selection for given (restricted) domain sizes.
inline DetectParams choose_params(std::span<const std::int64_t> domain_sizes,
                                  double walk_constant = kDefaultWalkConstant) {
  const std::size_t k = domain_sizes.size();
  if (k < 2) throw std::invalid_argument("choose_params: need k >= 2");
  std::vector<std::int64_t> sorted(domain_sizes.begin(), domain_sizes.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 1)
    throw std::invalid_argument("choose_params: domain sizes must be positive");
  const std::int64_t smallest = sorted.front();

  const auto clamp_subset = [smallest](std::int64_t v) {
    return std::min(smallest, std::max<std::int64_t>(2, v));
  };

  constexpr auto int64_max =
      static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max());

  std::int64_t subset;
  if (k == 2) {
    const std::int64_t small = sorted[0], big = sorted[1];
    const unsigned __int128 product = static_cast<unsigned __int128>(small) *
                                      static_cast<unsigned __int128>(big);
    if (product > int64_max)
      throw std::invalid_argument("choose_params: domain product overflows");
    const bool balanced =
        static_cast<unsigned __int128>(big) <
        static_cast<unsigned __int128>(small) * static_cast<unsigned __int128>(small);
    subset = balanced ? clamp_subset(ceil_root(small * big, 3)) : small;
  } else {
    unsigned __int128 rest = 1, all = 1, head_pow = 1;
    bool head_pow_overflow = false;
    for (std::size_t i = 0; i < k; ++i) {
      all *= static_cast<unsigned __int128>(sorted[i]);
      if (i > 0) rest *= static_cast<unsigned __int128>(sorted[i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (head_pow > (static_cast<unsigned __int128>(1) << 100)) {
        head_pow_overflow = true;
        break;
      }
      head_pow *= static_cast<unsigned __int128>(smallest);
    }
    const bool balanced = head_pow_overflow || rest <= head_pow;
    if (balanced) {
      if (all > int64_max)
        throw std::invalid_argument("choose_params: domain product overflows");
      subset = clamp_subset(ceil_root(static_cast<std::int64_t>(all),
                                      static_cast<int>(k) + 1));
    } else {
      subset = smallest;
    }
  }

  std::vector<std::int64_t> subsets(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    subsets[i] = std::min<std::int64_t>(subset, domain_sizes[i]);
  return make_detect_params(domain_sizes, subsets, walk_constant);
}

// Modeled query cost of one detection run.
inline std::int64_t cost_model_queries(const DetectParams& params, OracleMode mode) {
  const std::int64_t k = static_cast<std::int64_t>(params.subset_sizes.size());
  std::int64_t total_subset = 0;
  for (const std::int64_t l : params.subset_sizes) total_subset += l;
  const std::int64_t logS = ceil_log2(std::max<std::int64_t>(total_subset, 1));
  const std::int64_t setup =
      mode == OracleMode::comparison ? total_subset * logS : total_subset;
  const std::int64_t per_substep = mode == OracleMode::comparison ? 2 * k * logS : 2 * k;
  return setup + params.step_bound * (2 * per_substep);
}

// ── Sorted vertex data ───────────────────────────────────────────────────────

struct SortedEntry {
  std::int32_t function = 0;
  std::int64_t element = 0;  // absolute domain index
  std::int64_t value = 0;

  DomainPoint point() const { return {function, element}; }
};

// Canonical value-ordered list of the elements carried by a product-chain
// vertex, ordered by (value, function, element). Standard-mode construction
// queries each value once; comparison-mode construction orders entries by
// binary insertion with one comparison query per probe. Values are always
// annotated from the instance so the tie rule and the marked check read off
// the list without further queries; in comparison mode the annotation never
// decides the order — the charged comparisons do.
class SortedListL {
 public:
  // `subsets` holds absolute element indices per function.
  static SortedListL build(OracleSession& session,
                           const std::vector<std::vector<std::int64_t>>& subsets) {
    SortedListL list;
    if (session.mode() == OracleMode::standard) {
      for (std::size_t f = 0; f < subsets.size(); ++f)
        for (const std::int64_t x : subsets[f]) {
          const std::int64_t v =
              session.standard_query({static_cast<std::int32_t>(f), x});
          list.entries_.push_back(SortedEntry{static_cast<std::int32_t>(f), x, v});
        }
      std::sort(list.entries_.begin(), list.entries_.end(), order_before);
    } else {
      for (std::size_t f = 0; f < subsets.size(); ++f)
        for (const std::int64_t x : subsets[f])
          list.insert(session, static_cast<std::int32_t>(f), x);
    }
    return list;
  }

  const std::vector<SortedEntry>& entries() const { return entries_; }

  // Removal needs no oracle access: the entry is located by identity.
  void erase(std::int32_t function, std::int64_t element) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->function == function && it->element == element) {
        entries_.erase(it);
        return;
      }
    }
    throw std::invalid_argument("SortedListL::erase: element not present");
  }

  void insert(OracleSession& session, std::int32_t function, std::int64_t element) {
    SortedEntry e{function, element, 0};
    std::size_t lo = 0, hi = entries_.size();
    if (session.mode() == OracleMode::standard) {
      e.value = session.standard_query(e.point());
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (order_before(entries_[mid], e))
          lo = mid + 1;
        else
          hi = mid;
      }
    } else {
      // Annotation for the tie rule and the marked check; never decides the
      // order below — the charged comparisons do.
      e.value = session.instance().value(function, element);
      // One comparison query per probe: when the probed entry wins the
      // identity tie-break, "probe before e" is value(probe) <= value(e);
      // otherwise it is the strict inequality, read off the swapped query.
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const SortedEntry& m = entries_[mid];
        bool before;
        if (identity_before(m, e))
          before = session.comparison_query(m.point(), e.point()) == 1;
        else
          before = session.comparison_query(e.point(), m.point()) == 0;
        if (before)
          lo = mid + 1;
        else
          hi = mid;
      }
    }
    entries_.insert(entries_.begin() + static_cast<std::ptrdiff_t>(lo), e);
  }

  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    const auto fold = [&h](std::uint64_t x) {
      h ^= x;
      h *= 0x100000001b3ull;
    };
    for (const SortedEntry& e : entries_) {
      fold(static_cast<std::uint64_t>(e.function));
      fold(static_cast<std::uint64_t>(e.element));
      fold(static_cast<std::uint64_t>(e.value));
    }
    return h;
  }

 private:
  static bool identity_before(const SortedEntry& a, const SortedEntry& b) {
    return a.function != b.function ? a.function < b.function : a.element < b.element;
  }
  static bool order_before(const SortedEntry& a, const SortedEntry& b) {
    if (a.value != b.value) return a.value < b.value;
    return identity_before(a, b);
  }

  std::vector<SortedEntry> entries_;
};

// Free-function spelling of the construction.
inline SortedListL sorted_list(OracleSession& session,
                               const std::vector<std::vector<std::int64_t>>& subsets) {
  return SortedListL::build(session, subsets);
}

// True iff some run of equal values spans all `num_functions` functions.
// Reads only the list: zero queries.
inline bool is_marked(const SortedListL& list, int num_functions) {
  const auto& es = list.entries();
  const std::uint64_t full = (num_functions >= 64)
                                 ? ~0ull
                                 : ((1ull << num_functions) - 1);
  std::size_t i = 0;
  while (i < es.size()) {
    std::size_t j = i;
    std::uint64_t mask = 0;
    while (j < es.size() && es[j].value == es[i].value) {
      mask |= 1ull << es[j].function;
      ++j;
    }
    if ((mask & full) == full) return true;
    i = j;
  }
  return false;
}

// ── Detection backends ───────────────────────────────────────────────────────

struct DetectOutcome {
  bool claw_found = false;
  std::int64_t queries_used = 0;
  DetectBackend backend = DetectBackend::exact;
};

struct DetectOptions {
  double error_rate = kDefaultDetectErrorRate;  // cost-model miss probability
  std::int64_t max_edges = kDefaultEdgeCap;
  const ClawIndex* claw_index = nullptr;  // reused across calls when provided
};

namespace detail {

inline void validate_restriction(const ProblemInstance& inst,
                                 std::span<const Interval> restriction) {
  if (static_cast<int>(restriction.size()) != inst.k())
    throw std::invalid_argument("detect: one interval per function required");
  for (int f = 0; f < inst.k(); ++f) {
    const Interval& r = restriction[static_cast<std::size_t>(f)];
    if (r.lo < 0 || r.lo >= r.hi || r.hi > inst.domain_size(f))
      throw std::invalid_argument("detect: restriction interval out of range");
  }
}

inline std::vector<JohnsonGraph> restriction_factors(
    std::span<const Interval> restriction, std::span<const std::int64_t> subsets) {
  std::vector<JohnsonGraph> factors;
  factors.reserve(restriction.size());
  for (std::size_t i = 0; i < restriction.size(); ++i)
    factors.emplace_back(restriction[i].size(), subsets[i]);
  return factors;
}

// Classical shadow of the per-step list maintenance: swap one element in each
// walked factor, charging the deletions/insertions against the session.
class ShadowWalk {
 public:
  ShadowWalk(OracleSession& session, std::span<const Interval> restriction,
             std::span<const std::int64_t> subset_sizes, SplitMix64& rng)
      : session_(&session), restriction_(restriction.begin(), restriction.end()) {
    subsets_.resize(restriction.size());
    for (std::size_t f = 0; f < restriction.size(); ++f) {
      std::vector<std::int64_t> local =
          sample_distinct(rng, restriction[f].size(), subset_sizes[f]);
      auto& abs = subsets_[f];
      abs.reserve(local.size());
      for (const std::int64_t x : local) abs.push_back(restriction[f].lo + x);
    }
    list_ = SortedListL::build(session, subsets_);
  }

  // One product move: every non-frozen factor trades one element.
  void step(SplitMix64& rng) {
    for (std::size_t f = 0; f < subsets_.size(); ++f) {
      auto& subset = subsets_[f];
      const std::int64_t size = restriction_[f].size();
      const std::int64_t l = static_cast<std::int64_t>(subset.size());
      if (l >= size) continue;  // frozen coordinate
      const std::size_t out_pos =
          static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(l)));
      const std::int64_t outgoing = subset[out_pos];
      std::int64_t nm_rank = static_cast<std::int64_t>(
          uniform_below(rng, static_cast<std::uint64_t>(size - l)));
      // locate the nm_rank-th non-member of the (sorted) subset
      std::int64_t incoming = restriction_[f].lo;
      std::size_t member = 0;
      for (std::int64_t x = restriction_[f].lo; x < restriction_[f].hi; ++x) {
        if (member < subset.size() && subset[member] == x) {
          ++member;
          continue;
        }
        if (nm_rank == 0) {
          incoming = x;
          break;
        }
        --nm_rank;
      }
      subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(out_pos));
      subset.insert(std::lower_bound(subset.begin(), subset.end(), incoming), incoming);
      list_.erase(static_cast<std::int32_t>(f), outgoing);
      list_.insert(*session_, static_cast<std::int32_t>(f), incoming);
    }
  }

  const SortedListL& list() const { return list_; }

 private:
  OracleSession* session_;
  std::vector<Interval> restriction_;
  std::vector<std::vector<std::int64_t>> subsets_;  // sorted absolute indices
  SortedListL list_;
};

inline DetectOutcome detect_cost_model(OracleSession& session, bool ground_truth,
                                       const DetectParams& params, SplitMix64& rng,
                                       const DetectOptions& opts) {
  bool verdict = false;
  if (ground_truth) verdict = uniform_unit(rng) >= opts.error_rate;
  const std::int64_t q = cost_model_queries(params, session.mode());
  session.add_modeled_queries(q);
  return DetectOutcome{verdict, q, DetectBackend::cost_model};
}

// Marked predicate for claw detection: the carried subsets contain a value
// common to all functions.
inline MarkedPredicate claw_marked_predicate(const ProblemInstance& inst,
                                             std::vector<Interval> restriction,
                                             const ProductChain& chain) {
  const std::uint64_t full = (1ull << inst.k()) - 1;
  return [&inst, restriction = std::move(restriction), &chain,
          full](std::int64_t state) {
    const auto subsets = chain.state_subsets(state);
    std::unordered_map<std::int64_t, std::uint64_t> masks;
    for (std::size_t f = 0; f < subsets.size(); ++f) {
      for (const std::int64_t local : subsets[f]) {
        const std::int64_t v =
            inst.value(static_cast<int>(f), restriction[f].lo + local);
        auto& m = masks[v];
        m |= 1ull << f;
        if (m == full) return true;
      }
    }
    return false;
  };
}

}  // namespace detail

// Decide whether a claw exists within the restricted domains.
inline DetectOutcome claw_detect(OracleSession& session,
                                 std::span<const Interval> restriction,
                                 const DetectParams& params, DetectBackend backend,
                                 SplitMix64& rng, const DetectOptions& opts = {}) {
  detail::validate_restriction(session.instance(), restriction);
  if (params.subset_sizes.size() != restriction.size())
    throw std::invalid_argument("claw_detect: params do not match the restriction");

  if (backend == DetectBackend::cost_model) {
    bool truth;
    if (opts.claw_index) {
      truth = opts.claw_index->any_claw_within(restriction);
    } else {
      const ClawIndex local(session.instance());
      truth = local.any_claw_within(restriction);
    }
    return detail::detect_cost_model(session, truth, params, rng, opts);
  }

  const ProductChain chain(
      detail::restriction_factors(restriction, params.subset_sizes));
  std::vector<Interval> rvec(restriction.begin(), restriction.end());
  const MarkedPredicate pred =
      detail::claw_marked_predicate(session.instance(), std::move(rvec), chain);
  const WalkSpace ws(chain, pred, opts.max_edges);

  const std::int64_t before = session.query_count();
  detail::ShadowWalk shadow(session, restriction, params.subset_sizes, rng);
  std::int64_t steps = 0;
  const bool verdict = detect_once(ws, params.step_bound, rng, &steps);
  for (std::int64_t i = 0; i < steps; ++i) {
    shadow.step(rng);
    shadow.step(rng);
  }
  return DetectOutcome{verdict, session.query_count() - before, DetectBackend::exact};
}

// Relation over p values of the first function and q of the second.
using ValueRelation = std::function<bool(std::span<const std::int64_t>)>;

namespace detail {

// Ordered tuples of distinct positions; `f` sees the chosen index tuple.
template <typename F>
inline bool for_each_ordered_tuple(std::int64_t count, int arity,
                                   std::vector<std::int64_t>& idx, F&& f) {
  if (arity == 0) return f();
  for (std::int64_t i = 0; i < count; ++i) {
    bool used = false;
    for (int j = 0; j < static_cast<int>(idx.size()); ++j)
      if (idx[static_cast<std::size_t>(j)] == i) used = true;
    if (used) continue;
    idx.push_back(i);
    if (for_each_ordered_tuple(count, arity - 1, idx, f)) return true;
    idx.pop_back();
  }
  return false;
}

}  // namespace detail

// Detection of an ordered (p, q)-tuple of distinct elements whose values
// satisfy `relation`; same machinery as claw_detect with the marked predicate
// and the marked-fraction bound swapped out.
inline DetectOutcome subset_detect(OracleSession& session, int p, int q,
                                   const ValueRelation& relation,
                                   std::span<const Interval> restriction,
                                   const DetectParams& params, DetectBackend backend,
                                   SplitMix64& rng, const DetectOptions& opts = {}) {
  const ProblemInstance& inst = session.instance();
  detail::validate_restriction(inst, restriction);
  if (inst.k() != 2 || restriction.size() != 2)
    throw std::invalid_argument("subset_detect: defined for two functions");
  if (p < 1 || q < 1)
    throw std::invalid_argument("subset_detect: p and q must be at least 1");
  const std::int64_t l = params.subset_sizes[0];
  const std::int64_t m = params.subset_sizes[1];
  if (p > l || q > m)
    throw std::invalid_argument("subset_detect: tuple sizes exceed subset sizes");

  const std::int64_t N = restriction[0].size();
  const std::int64_t M = restriction[1].size();
  DetectParams sub = params;
  sub.marked_fraction_bound =
      (static_cast<double>(binomial(l, p)) / static_cast<double>(binomial(N, p))) *
      (static_cast<double>(binomial(m, q)) / static_cast<double>(binomial(M, q)));
  sub.step_bound = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(
             sub.walk_constant /
             std::sqrt(sub.marked_fraction_bound * sub.gap_bound))));

  const auto tuple_exists = [&](std::span<const std::int64_t> xs,
                                std::span<const std::int64_t> ys) {
    std::vector<std::int64_t> xi, yi;
    std::vector<std::int64_t> values(static_cast<std::size_t>(p + q));
    return detail::for_each_ordered_tuple(
        static_cast<std::int64_t>(xs.size()), p, xi, [&] {
          for (int i = 0; i < p; ++i)
            values[static_cast<std::size_t>(i)] =
                inst.value(0, xs[static_cast<std::size_t>(xi[static_cast<std::size_t>(i)])]);
          return detail::for_each_ordered_tuple(
              static_cast<std::int64_t>(ys.size()), q, yi, [&] {
                for (int j = 0; j < q; ++j)
                  values[static_cast<std::size_t>(p + j)] = inst.value(
                      1, ys[static_cast<std::size_t>(yi[static_cast<std::size_t>(j)])]);
                return relation(values);
              });
        });
  };

  if (backend == DetectBackend::cost_model) {
    unsigned __int128 work = 1;
    for (int i = 0; i < p; ++i) work *= static_cast<unsigned __int128>(N);
    for (int j = 0; j < q; ++j) work *= static_cast<unsigned __int128>(M);
    if (work > 100'000'000u)
      throw SizeCapError("subset_detect: restriction too large for enumeration");
    std::vector<std::int64_t> xs, ys;
    for (std::int64_t x = restriction[0].lo; x < restriction[0].hi; ++x) xs.push_back(x);
    for (std::int64_t y = restriction[1].lo; y < restriction[1].hi; ++y) ys.push_back(y);
    const bool truth = tuple_exists(xs, ys);
    return detail::detect_cost_model(session, truth, sub, rng, opts);
  }

  const ProductChain chain(
      detail::restriction_factors(restriction, sub.subset_sizes));
  std::vector<Interval> rvec(restriction.begin(), restriction.end());
  const MarkedPredicate pred = [&inst, &chain, rvec, &tuple_exists](std::int64_t state) {
    const auto subsets = chain.state_subsets(state);
    std::vector<std::int64_t> xs, ys;
    xs.reserve(subsets[0].size());
    ys.reserve(subsets[1].size());
    for (const std::int64_t v : subsets[0]) xs.push_back(rvec[0].lo + v);
    for (const std::int64_t v : subsets[1]) ys.push_back(rvec[1].lo + v);
    return tuple_exists(xs, ys);
  };
  const WalkSpace ws(chain, pred, opts.max_edges);

  const std::int64_t before = session.query_count();
  detail::ShadowWalk shadow(session, restriction, sub.subset_sizes, rng);
  std::int64_t steps = 0;
  const bool verdict = detect_once(ws, sub.step_bound, rng, &steps);
  for (std::int64_t i = 0; i < steps; ++i) {
    shadow.step(rng);
    shadow.step(rng);
  }
  return DetectOutcome{verdict, session.query_count() - before, DetectBackend::exact};
}

// Exact per-t success profile of the walk detector on a restriction, used by
// calibration and verification; makes no charged queries.
inline std::vector<double> claw_detect_success_profile(
    const ProblemInstance& inst, std::span<const Interval> restriction,
    const DetectParams& params, std::int64_t max_edges = kDefaultEdgeCap) {
  detail::validate_restriction(inst, restriction);
  const ProductChain chain(
      detail::restriction_factors(restriction, params.subset_sizes));
  std::vector<Interval> rvec(restriction.begin(), restriction.end());
  const MarkedPredicate pred =
      detail::claw_marked_predicate(inst, std::move(rvec), chain);
  const WalkSpace ws(chain, pred, max_edges);
  return detect_success_profile(ws, params.step_bound);
}

// ── Calibration ──────────────────────────────────────────────────────────────

struct CalibrationPoint {
  ProblemInstance instance;
  std::vector<std::int64_t> subset_sizes;
};

// Single-claw instances on the tiny grid with pair subsets.
inline std::vector<CalibrationPoint> default_calibration_family(std::uint64_t seed = 7) {
  std::vector<CalibrationPoint> family;
  for (std::int64_t n = 4; n <= 6; ++n)
    for (std::int64_t m = n; m <= 6; ++m)
      family.push_back(CalibrationPoint{
          make_planted_instance({n, m}, 1, 64, derive_stream(seed, n, m).state),
          {2, 2}});
  return family;
}

// Smallest candidate constant whose exact success probability reaches
// `target` on every family member. Throws CalibrationError with the measured
// curve when none suffices.
inline double calibrate_walk_constant(
    std::span<const CalibrationPoint> family,
    std::span<const double> candidates = std::span<const double>(),
    double target = 2.0 / 3.0) {
  static constexpr double kDefaultCandidates[] = {1.0, 2.0, 4.0, 8.0};
  if (candidates.empty()) candidates = kDefaultCandidates;
  std::string curve;
  for (const double c : candidates) {
    double worst = 1.0;
    for (const CalibrationPoint& point : family) {
      const DetectParams params = make_detect_params(
          point.instance.domain_sizes(), point.subset_sizes, c);
      const auto restriction = point.instance.full_domains();
      const double success = [&] {
        const std::vector<double> profile = claw_detect_success_profile(
            point.instance, restriction, params);
        double s = 0.0;
        for (const double x : profile) s += x;
        return s / static_cast<double>(profile.size());
      }();
      worst = std::min(worst, success);
    }
    curve += " c=" + std::to_string(c) + ":" + std::to_string(worst);
    if (worst >= target) return c;
  }
  throw CalibrationError("calibrate_walk_constant: no candidate reached " +
                         std::to_string(target) + ";" + curve);
}

}  // namespace clawsim
