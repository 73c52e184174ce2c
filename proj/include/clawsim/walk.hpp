// walk.hpp — exact amplitude-level simulator of walk-based detection.
//
// The walk register spans the directed edges of a product chain; a detection
// run adds a one-qubit control register. One walk step composes two
// reflections through the coherent states of the absorbing chain, grouped by
// tail and by head: unmarked sectors diffuse, marked sectors pick up a phase
// flip (their absorbing coherent state is a self-loop outside the edge
// space). With no marked vertices the uniform edge superposition is a fixed
// point, which is what makes the detector's error one-sided.
//
// Everything here is exact double-precision linear algebra on tiny chains;
// oracle-query attribution happens one layer up.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "clawsim/errors.hpp"
#include "clawsim/johnson.hpp"
#include "clawsim/rng.hpp"

namespace clawsim {

using Amplitude = std::complex<double>;
using MarkedPredicate = std::function<bool(std::int64_t)>;

inline constexpr std::int64_t kDefaultEdgeCap = 1 << 15;

// Directed-edge tables plus marked flags, built once per detection run.
class WalkSpace {
 public:
  WalkSpace(const ProductChain& chain, const MarkedPredicate& marked,
            std::int64_t max_edges = kDefaultEdgeCap)
      : num_states_(chain.num_states()), degree_(chain.degree()) {
    if (degree_ > 0 && num_states_ > max_edges / degree_)
      throw SizeCapError("WalkSpace: directed-edge count exceeds the cap");
    num_edges_ = num_states_ * degree_;

    marked_.resize(static_cast<std::size_t>(num_states_));
    bool any = false;
    for (std::int64_t v = 0; v < num_states_; ++v) {
      marked_[static_cast<std::size_t>(v)] = marked(v) ? 1 : 0;
      any |= marked_[static_cast<std::size_t>(v)] != 0;
    }
    any_marked_ = any;

    head_.resize(static_cast<std::size_t>(num_edges_));
    rev_.resize(static_cast<std::size_t>(num_edges_));
    touches_marked_.resize(static_cast<std::size_t>(num_edges_));
    if (!chain.has_walked_factor()) {
      for (std::int64_t v = 0; v < num_states_; ++v) {
        head_[static_cast<std::size_t>(v)] = v;  // self-loop move
        rev_[static_cast<std::size_t>(v)] = v;
        touches_marked_[static_cast<std::size_t>(v)] = marked_[static_cast<std::size_t>(v)];
      }
      return;
    }
    for (std::int64_t v = 0; v < num_states_; ++v) {
      for (std::int64_t e = 0; e < degree_; ++e) {
        const std::int64_t idx = v * degree_ + e;
        const std::int64_t j = chain.neighbor(v, e);
        head_[static_cast<std::size_t>(idx)] = j;
        rev_[static_cast<std::size_t>(idx)] =
            j * degree_ + chain.reverse_edge_index(v, e);
        touches_marked_[static_cast<std::size_t>(idx)] =
            (marked_[static_cast<std::size_t>(v)] || marked_[static_cast<std::size_t>(j)])
                ? 1
                : 0;
      }
    }
  }

  std::int64_t num_states() const { return num_states_; }
  std::int64_t degree() const { return degree_; }
  std::int64_t num_edges() const { return num_edges_; }
  bool any_marked() const { return any_marked_; }
  bool is_marked(std::int64_t v) const { return marked_[static_cast<std::size_t>(v)] != 0; }
  std::int64_t tail(std::int64_t edge) const { return edge / degree_; }
  std::int64_t head(std::int64_t edge) const { return head_[static_cast<std::size_t>(edge)]; }
  std::int64_t reverse(std::int64_t edge) const { return rev_[static_cast<std::size_t>(edge)]; }
  bool edge_touches_marked(std::int64_t edge) const {
    return touches_marked_[static_cast<std::size_t>(edge)] != 0;
  }

 private:
  std::int64_t num_states_;
  std::int64_t degree_;
  std::int64_t num_edges_ = 0;
  bool any_marked_ = false;
  std::vector<char> marked_;
  std::vector<std::int64_t> head_;
  std::vector<std::int64_t> rev_;
  std::vector<char> touches_marked_;
};

// Control qubit (x) directed edges. Sector b of the amplitude vector holds the
// walk register conditioned on the control reading b.
struct WalkState {
  std::vector<Amplitude> amp;  // size 2 * num_edges
  std::int64_t num_edges = 0;

  std::span<Amplitude> sector(int b) {
    return {amp.data() + static_cast<std::ptrdiff_t>(b) * num_edges,
            static_cast<std::size_t>(num_edges)};
  }
  std::span<const Amplitude> sector(int b) const {
    return {amp.data() + static_cast<std::ptrdiff_t>(b) * num_edges,
            static_cast<std::size_t>(num_edges)};
  }

  double squared_norm() const {
    double s = 0.0;
    for (const Amplitude& a : amp) s += std::norm(a);
    return s;
  }
};

// Control |0>, equal amplitude on every directed edge.
inline WalkState prepare_edge_superposition(const WalkSpace& ws) {
  WalkState st;
  st.num_edges = ws.num_edges();
  st.amp.assign(static_cast<std::size_t>(2 * ws.num_edges()), Amplitude{0.0, 0.0});
  const double a = 1.0 / std::sqrt(static_cast<double>(ws.num_edges()));
  for (std::int64_t e = 0; e < ws.num_edges(); ++e)
    st.amp[static_cast<std::size_t>(e)] = Amplitude{a, 0.0};
  return st;
}

// Reflection through the span of the coherent states of the absorbing chain,
// grouped by tail vertex: unmarked tail sectors diffuse through their
// coherent state, marked tail sectors pick up a phase flip (their absorbing
// coherent state is the self-loop, which lies outside the edge space). An
// involution either way.
inline void reflect_tail_coherent(const WalkSpace& ws, std::span<Amplitude> a) {
  const std::int64_t r = ws.degree();
  const double scale = 2.0 / static_cast<double>(r);
  for (std::int64_t v = 0; v < ws.num_states(); ++v) {
    const std::int64_t base = v * r;
    if (ws.is_marked(v)) {
      for (std::int64_t e = 0; e < r; ++e) {
        Amplitude& x = a[static_cast<std::size_t>(base + e)];
        x = -x;
      }
      continue;
    }
    Amplitude sum{0.0, 0.0};
    for (std::int64_t e = 0; e < r; ++e) sum += a[static_cast<std::size_t>(base + e)];
    const Amplitude fold = scale * sum;
    for (std::int64_t e = 0; e < r; ++e) {
      Amplitude& x = a[static_cast<std::size_t>(base + e)];
      x = fold - x;
    }
  }
}

// Same reflection grouped by head vertex; edges into j are the reverses of
// edges out of j.
inline void reflect_head_coherent(const WalkSpace& ws, std::span<Amplitude> a) {
  const std::int64_t r = ws.degree();
  const double scale = 2.0 / static_cast<double>(r);
  for (std::int64_t v = 0; v < ws.num_states(); ++v) {
    const std::int64_t base = v * r;
    if (ws.is_marked(v)) {
      for (std::int64_t e = 0; e < r; ++e) {
        Amplitude& x = a[static_cast<std::size_t>(ws.reverse(base + e))];
        x = -x;
      }
      continue;
    }
    Amplitude sum{0.0, 0.0};
    for (std::int64_t e = 0; e < r; ++e)
      sum += a[static_cast<std::size_t>(ws.reverse(base + e))];
    const Amplitude fold = scale * sum;
    for (std::int64_t e = 0; e < r; ++e) {
      Amplitude& x = a[static_cast<std::size_t>(ws.reverse(base + e))];
      x = fold - x;
    }
  }
}

// One walk step on a single walk-register vector.
inline void apply_walk_operator(const WalkSpace& ws, std::span<Amplitude> a) {
  reflect_tail_coherent(ws, a);
  reflect_head_coherent(ws, a);
}

// One walk step on the walk register of a full control (x) edge state.
inline void apply_walk_operator(const WalkSpace& ws, WalkState& st) {
  apply_walk_operator(ws, st.sector(0));
  apply_walk_operator(ws, st.sector(1));
}

inline void hadamard_control(WalkState& st) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto s0 = st.sector(0);
  auto s1 = st.sector(1);
  for (std::size_t i = 0; i < s0.size(); ++i) {
    const Amplitude x = s0[i];
    const Amplitude y = s1[i];
    s0[i] = inv_sqrt2 * (x + y);
    s1[i] = inv_sqrt2 * (x - y);
  }
}

// Walk steps applied only where the control reads 1.
inline void controlled_walk_steps(const WalkSpace& ws, WalkState& st, std::int64_t t) {
  for (std::int64_t i = 0; i < t; ++i) apply_walk_operator(ws, st.sector(1));
}

// One full detection run: prepare, Hadamard, t uniform in [1, step_bound],
// controlled walk, Hadamard, measure. True iff the control reads 1 or the
// measured edge touches a marked vertex.
inline bool detect_once(const WalkSpace& ws, std::int64_t step_bound, SplitMix64& rng,
                        std::int64_t* steps_out = nullptr) {
  if (step_bound < 1)
    throw std::invalid_argument("detect_once: step bound must be at least 1");
  const std::int64_t t =
      1 + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(step_bound)));
  if (steps_out) *steps_out = t;

  WalkState st = prepare_edge_superposition(ws);
  hadamard_control(st);
  controlled_walk_steps(ws, st, t);
  hadamard_control(st);

  double p1 = 0.0;
  for (const Amplitude& a : st.sector(1)) p1 += std::norm(a);
  const double u = uniform_unit(rng);
  if (u < p1) return true;

  // Control read 0: sample an edge from that sector and inspect endpoints.
  auto s0 = st.sector(0);
  double total0 = 0.0;
  for (const Amplitude& a : s0) total0 += std::norm(a);
  if (total0 <= 0.0) return false;
  double target = uniform_unit(rng) * total0;
  std::int64_t edge = ws.num_edges() - 1;
  for (std::int64_t e = 0; e < ws.num_edges(); ++e) {
    target -= std::norm(s0[static_cast<std::size_t>(e)]);
    if (target <= 0.0) {
      edge = e;
      break;
    }
  }
  return ws.edge_touches_marked(edge);
}

// Exact success probability for each t in [1, step_bound]; no sampling.
inline std::vector<double> detect_success_profile(const WalkSpace& ws,
                                                  std::int64_t step_bound) {
  if (step_bound < 1)
    throw std::invalid_argument("detect_success_profile: step bound must be at least 1");
  const std::int64_t E = ws.num_edges();
  const double a0 = 1.0 / std::sqrt(static_cast<double>(E));
  std::vector<Amplitude> walked(static_cast<std::size_t>(E), Amplitude{a0, 0.0});

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(step_bound));
  for (std::int64_t t = 1; t <= step_bound; ++t) {
    apply_walk_operator(ws, {walked.data(), static_cast<std::size_t>(E)});
    double p = 0.0;
    for (std::int64_t e = 0; e < E; ++e) {
      const Amplitude w = walked[static_cast<std::size_t>(e)];
      const Amplitude diff = 0.5 * (Amplitude{a0, 0.0} - w);
      p += std::norm(diff);
      if (ws.edge_touches_marked(e)) {
        const Amplitude mean = 0.5 * (Amplitude{a0, 0.0} + w);
        p += std::norm(mean);
      }
    }
    out.push_back(p);
  }
  return out;
}

// Success probability of detect_once with t averaged over [1, step_bound].
inline double detect_success_probability(const WalkSpace& ws, std::int64_t step_bound) {
  const std::vector<double> profile = detect_success_profile(ws, step_bound);
  double sum = 0.0;
  for (const double p : profile) sum += p;
  return sum / static_cast<double>(profile.size());
}

}  // namespace clawsim
