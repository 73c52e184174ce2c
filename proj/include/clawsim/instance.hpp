// instance.hpp — hidden-function instances, the two oracle models, query
// accounting, planted generators and serialization.
//
// An instance holds k value tables f_i : {0..N_i-1} -> {1..|Z|} with
// N_1 <= ... <= N_k. A claw is a tuple (x_1..x_k) whose values all agree.
// Oracle sessions are the only query-counted access path; everything else
// that reads tables directly is simulator bookkeeping and is never charged.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "clawsim/errors.hpp"
#include "clawsim/rng.hpp"

namespace clawsim {

enum class OracleMode { standard, comparison };

inline const char* to_string(OracleMode m) {
  return m == OracleMode::standard ? "standard" : "comparison";
}

// One element of one function's domain. Functions are addressed by index,
// elements are 0-based.
struct DomainPoint {
  std::int32_t function = 0;
  std::int64_t element = 0;
};

// Half-open block [lo, hi) of one function's domain.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t size() const { return hi - lo; }
  bool contains(std::int64_t x) const { return x >= lo && x < hi; }
  bool operator==(const Interval&) const = default;
};

class ProblemInstance {
 public:
  ProblemInstance(std::vector<std::int64_t> domain_sizes, std::int64_t range_size,
                  std::vector<std::vector<std::int64_t>> values)
      : domains_(std::move(domain_sizes)),
        range_(range_size),
        values_(std::move(values)) {
    validate();
  }

  int k() const { return static_cast<int>(domains_.size()); }
  const std::vector<std::int64_t>& domain_sizes() const { return domains_; }
  std::int64_t domain_size(int f) const { return domains_.at(static_cast<std::size_t>(f)); }
  std::int64_t range_size() const { return range_; }

  std::int64_t value(int f, std::int64_t x) const {
    return values_.at(static_cast<std::size_t>(f)).at(static_cast<std::size_t>(x));
  }

  const std::vector<std::vector<std::int64_t>>& tables() const { return values_; }

  std::vector<Interval> full_domains() const {
    std::vector<Interval> out;
    out.reserve(domains_.size());
    for (const std::int64_t n : domains_) out.push_back({0, n});
    return out;
  }

  bool operator==(const ProblemInstance&) const = default;

 private:
  void validate() const {
    if (domains_.size() < 2)
      throw std::invalid_argument("instance: need at least two functions");
    if (range_ < 1) throw std::invalid_argument("instance: range must be positive");
    for (std::size_t i = 0; i < domains_.size(); ++i) {
      if (domains_[i] < 1)
        throw std::invalid_argument("instance: domain sizes must be positive");
      if (i > 0 && domains_[i - 1] > domains_[i])
        throw std::invalid_argument("instance: domain sizes must be non-decreasing");
    }
    if (values_.size() != domains_.size())
      throw std::invalid_argument("instance: one value table per function required");
    for (std::size_t f = 0; f < values_.size(); ++f) {
      if (static_cast<std::int64_t>(values_[f].size()) != domains_[f])
        throw std::invalid_argument("instance: table size does not match domain size");
      for (const std::int64_t v : values_[f])
        if (v < 1 || v > range_)
          throw std::invalid_argument("instance: value outside [1, range_size]");
    }
  }

  std::vector<std::int64_t> domains_;
  std::int64_t range_;
  std::vector<std::vector<std::int64_t>> values_;
};

// Claw tuple or the all -1 "none" sentinel.
struct ClawTuple {
  std::vector<std::int64_t> indices;

  static ClawTuple none(int k) {
    return ClawTuple{std::vector<std::int64_t>(static_cast<std::size_t>(k), -1)};
  }

  bool found() const { return !indices.empty() && indices.front() >= 0; }

  bool verifies(const ProblemInstance& inst) const {
    if (!found()) return false;
    if (static_cast<int>(indices.size()) != inst.k()) return false;
    for (int f = 0; f < inst.k(); ++f)
      if (indices[static_cast<std::size_t>(f)] < 0 ||
          indices[static_cast<std::size_t>(f)] >= inst.domain_size(f))
        return false;
    const std::int64_t v0 = inst.value(0, indices[0]);
    for (int f = 1; f < inst.k(); ++f)
      if (inst.value(f, indices[static_cast<std::size_t>(f)]) != v0) return false;
    return true;
  }

  bool operator==(const ClawTuple&) const = default;
};

// Query-counted oracle access. `query_count` advances by exactly one per real
// oracle invocation; cost-model backends attribute their modeled cost through
// `add_modeled_queries` so search totals always equal the session delta.
class OracleSession {
 public:
  OracleSession(const ProblemInstance& inst, OracleMode mode)
      : inst_(&inst), mode_(mode) {}

  std::int64_t standard_query(DomainPoint p) {
    if (mode_ != OracleMode::standard)
      throw ModeError("standard_query: session is in comparison mode");
    check_point(p);
    ++count_;
    return inst_->value(p.function, p.element);
  }

  // 1 iff value(p) <= value(q); a single query regardless of the outcome.
  int comparison_query(DomainPoint p, DomainPoint q) {
    if (mode_ != OracleMode::comparison)
      throw ModeError("comparison_query: session is in standard mode");
    check_point(p);
    check_point(q);
    ++count_;
    return inst_->value(p.function, p.element) <= inst_->value(q.function, q.element)
               ? 1
               : 0;
  }

  std::int64_t query_count() const { return count_; }
  void add_modeled_queries(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("add_modeled_queries: negative charge");
    count_ += n;
  }

  OracleMode mode() const { return mode_; }

  // Ground-truth access for simulator bookkeeping (marking predicates, value
  // annotation). Never charged; algorithms must go through the query ops.
  const ProblemInstance& instance() const { return *inst_; }

 private:
  void check_point(DomainPoint p) const {
    if (p.function < 0 || p.function >= inst_->k())
      throw std::out_of_range("oracle query: function index out of range");
    if (p.element < 0 || p.element >= inst_->domain_size(p.function))
      throw std::out_of_range("oracle query: element out of range");
  }

  const ProblemInstance* inst_;
  OracleMode mode_;
  std::int64_t count_ = 0;
};

// Instance with exactly `num_claws` k-claws. Claw values appear once per
// function; every other value is globally distinct, so the claw count is
// controlled exactly. Deterministic for a fixed seed.
inline ProblemInstance make_planted_instance(std::vector<std::int64_t> domain_sizes,
                                             std::int64_t num_claws,
                                             std::int64_t range_size,
                                             std::uint64_t seed) {
  const int k = static_cast<int>(domain_sizes.size());
  if (k < 2) throw std::invalid_argument("make_planted_instance: need k >= 2");
  for (std::size_t i = 0; i < domain_sizes.size(); ++i) {
    if (domain_sizes[i] < 1)
      throw std::invalid_argument("make_planted_instance: domain sizes must be positive");
    if (i > 0 && domain_sizes[i - 1] > domain_sizes[i])
      throw std::invalid_argument("make_planted_instance: sizes must be non-decreasing");
  }
  if (num_claws < 0)
    throw std::invalid_argument("make_planted_instance: negative claw count");
  if (num_claws > domain_sizes.front())
    throw std::invalid_argument(
        "make_planted_instance: more claws than the smallest domain can host");

  std::int64_t distinct_needed = num_claws;
  for (const std::int64_t n : domain_sizes) distinct_needed += n - num_claws;
  if (range_size < distinct_needed)
    throw std::invalid_argument(
        "make_planted_instance: range too small to keep non-claw values distinct");

  SplitMix64 g = derive_stream(seed, 0x15A7ull);

  std::vector<std::int64_t> pool = sample_distinct(g, range_size, distinct_needed);
  shuffle_in_place(g, pool);
  std::size_t cursor = 0;

  std::vector<std::int64_t> claw_values(pool.begin(),
                                        pool.begin() + static_cast<std::ptrdiff_t>(num_claws));
  cursor += static_cast<std::size_t>(num_claws);

  std::vector<std::vector<std::int64_t>> tables;
  tables.reserve(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    const std::int64_t n = domain_sizes[static_cast<std::size_t>(f)];
    std::vector<std::int64_t> table(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> spots = sample_distinct(g, n, num_claws);
    shuffle_in_place(g, spots);
    for (std::int64_t c = 0; c < num_claws; ++c)
      table[static_cast<std::size_t>(spots[static_cast<std::size_t>(c)])] =
          claw_values[static_cast<std::size_t>(c)] + 1;
    for (std::int64_t x = 0; x < n; ++x) {
      if (table[static_cast<std::size_t>(x)] == 0)
        table[static_cast<std::size_t>(x)] = pool[cursor++] + 1;
    }
    tables.push_back(std::move(table));
  }
  return ProblemInstance(std::move(domain_sizes), range_size, std::move(tables));
}

// Canonical text form. Field names are fixed: k, domains, range_size, values.
inline std::string serialize_instance(const ProblemInstance& inst) {
  nlohmann::json j;
  j["k"] = inst.k();
  j["domains"] = inst.domain_sizes();
  j["range_size"] = inst.range_size();
  j["values"] = inst.tables();
  return j.dump();
}

inline ProblemInstance deserialize_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  try {
    if (!j.is_object()) throw std::invalid_argument("instance document: not an object");
    for (const char* field : {"k", "domains", "range_size", "values"})
      if (!j.contains(field))
        throw std::invalid_argument(std::string("instance document: missing field '") +
                                    field + "'");
    const auto k = j.at("k").get<std::int64_t>();
    auto domains = j.at("domains").get<std::vector<std::int64_t>>();
    const auto range = j.at("range_size").get<std::int64_t>();
    auto values = j.at("values").get<std::vector<std::vector<std::int64_t>>>();
    if (k != static_cast<std::int64_t>(domains.size()))
      throw std::invalid_argument("instance document: k does not match domains");
    return ProblemInstance(std::move(domains), range, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance document: ") + e.what());
  }
}

// Ground-truth claw positions, built once per instance from direct table
// reads. Backs the cost-model detector and harness soundness checks; it is
// not an oracle path and consumes no queries.
class ClawIndex {
 public:
  explicit ClawIndex(const ProblemInstance& inst) : k_(inst.k()) {
    std::unordered_map<std::int64_t, std::size_t> slot;
    slot.reserve(static_cast<std::size_t>(inst.domain_size(0)) * 2);
    for (std::int64_t x = 0; x < inst.domain_size(0); ++x) {
      const std::int64_t v = inst.value(0, x);
      auto [it, fresh] = slot.try_emplace(v, entries_.size());
      if (fresh) {
        entries_.push_back(Entry{v, std::vector<std::vector<std::int64_t>>(
                                        static_cast<std::size_t>(k_))});
      }
      entries_[it->second].positions[0].push_back(x);
    }
    for (int f = 1; f < k_; ++f) {
      for (std::int64_t x = 0; x < inst.domain_size(f); ++x) {
        const auto it = slot.find(inst.value(f, x));
        if (it != slot.end())
          entries_[it->second].positions[static_cast<std::size_t>(f)].push_back(x);
      }
    }
    std::erase_if(entries_, [](const Entry& e) {
      for (const auto& pos : e.positions)
        if (pos.empty()) return true;
      return false;
    });
  }

  // Does some claw lie inside the given per-function intervals?
  bool any_claw_within(std::span<const Interval> restriction) const {
    for (const Entry& e : entries_) {
      bool ok = true;
      for (int f = 0; f < k_ && ok; ++f) {
        const auto& pos = e.positions[static_cast<std::size_t>(f)];
        const auto it = std::lower_bound(pos.begin(), pos.end(),
                                         restriction[static_cast<std::size_t>(f)].lo);
        ok = it != pos.end() && *it < restriction[static_cast<std::size_t>(f)].hi;
      }
      if (ok) return true;
    }
    return false;
  }

  // Number of claw tuples in the whole instance.
  std::int64_t claw_count() const {
    std::int64_t total = 0;
    for (const Entry& e : entries_) {
      std::int64_t tuples = 1;
      for (const auto& pos : e.positions)
        tuples *= static_cast<std::int64_t>(pos.size());
      total += tuples;
    }
    return total;
  }

 private:
  struct Entry {
    std::int64_t value;
    std::vector<std::vector<std::int64_t>> positions;  // ascending, per function
  };

  int k_;
  std::vector<Entry> entries_;
};

}  // namespace clawsim
