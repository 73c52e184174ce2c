// johnson.hpp — Johnson graphs, their symmetric Markov chains, categorical
// products and spectra.
//
// J(n, k) has the k-subsets of {0..n-1} as vertices, adjacent iff the
// symmetric difference has size 2; the chain moves to a uniform neighbor.
// A product chain moves every non-frozen coordinate simultaneously. Factors
// with k == 0 or k == n have a single vertex and stay put ("frozen"); a chain
// whose factors are all frozen degenerates to one state with a self-loop.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "clawsim/combinatorics.hpp"
#include "clawsim/errors.hpp"

namespace clawsim {

struct JohnsonGraph {
  std::int64_t n = 1;
  std::int64_t k = 1;

  JohnsonGraph(std::int64_t n_, std::int64_t k_) : n(n_), k(k_) {
    if (n < 1 || k < 0 || k > n)
      throw std::invalid_argument("JohnsonGraph: need 1 <= n and 0 <= k <= n");
  }

  std::int64_t vertex_count() const { return binomial(n, k); }
  std::int64_t degree() const { return k * (n - k); }
  bool frozen() const { return degree() == 0; }
};

struct SpectralLine {
  double eigenvalue = 1.0;
  std::int64_t multiplicity = 1;
};

struct Spectrum {
  std::vector<SpectralLine> lines;  // descending eigenvalue
  double gap = 1.0;                 // 1 - max non-principal |eigenvalue|; 1 when none

  std::int64_t dimension() const {
    std::int64_t d = 0;
    for (const auto& l : lines) d += l.multiplicity;
    return d;
  }

  // Full multiset, ascending.
  std::vector<double> expanded() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(dimension()));
    for (const auto& l : lines)
      for (std::int64_t i = 0; i < l.multiplicity; ++i) out.push_back(l.eigenvalue);
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Closed-form chain spectrum of J(n, k): eigenvalues
// ((k-j)(n-k-j) - j) / (k(n-k)) for j = 0..min(k, n-k), with multiplicity
// C(n, j) - C(n, j-1). Frozen graphs report the single eigenvalue 1.
inline Spectrum johnson_spectrum(std::int64_t n, std::int64_t k) {
  const JohnsonGraph g(n, k);
  if (g.frozen()) return Spectrum{{SpectralLine{1.0, 1}}, 1.0};

  const std::int64_t d = std::min(k, n - k);
  const double denom = static_cast<double>(g.degree());
  Spectrum spec;
  spec.lines.reserve(static_cast<std::size_t>(d) + 1);
  double worst = 0.0;
  for (std::int64_t j = 0; j <= d; ++j) {
    const double ev =
        static_cast<double>((k - j) * (n - k - j) - j) / denom;
    const std::int64_t mult = binomial(n, j) - (j > 0 ? binomial(n, j - 1) : 0);
    spec.lines.push_back(SpectralLine{ev, mult});
    if (j > 0) worst = std::max(worst, std::abs(ev));
  }
  spec.gap = 1.0 - worst;
  return spec;
}

// Minimum rule for the gap of a categorical product.
inline double product_gap(std::span<const double> factor_gaps) {
  if (factor_gaps.empty())
    throw std::invalid_argument("product_gap: at least one factor required");
  double out = 1.0;
  for (const double g : factor_gaps) {
    if (g < 0.0 || g > 1.0)
      throw std::invalid_argument("product_gap: gaps must lie in [0, 1]");
    out = std::min(out, g);
  }
  return out;
}

// Symmetric Markov chain on a categorical product of Johnson graphs, with
// precomputed per-factor adjacency so walk operators run straight off tables.
class ProductChain {
 public:
  explicit ProductChain(std::vector<JohnsonGraph> factors,
                        std::int64_t table_cell_cap = 10'000'000) {
    if (factors.empty())
      throw std::invalid_argument("ProductChain: at least one factor required");

    std::int64_t cells = 0;
    num_states_ = 1;
    degree_ = 1;
    for (const JohnsonGraph& g : factors) {
      const std::int64_t vc = g.vertex_count();
      const std::int64_t deg = g.degree();
      cells += vc * std::max<std::int64_t>(deg, 1);
      if (cells > table_cell_cap)
        throw SizeCapError("ProductChain: factor tables exceed the cell budget");
      if (num_states_ > table_cell_cap / std::max<std::int64_t>(vc, 1))
        throw SizeCapError("ProductChain: state space exceeds the cell budget");
      num_states_ *= vc;
      if (!g.frozen()) {
        walked_.push_back(static_cast<int>(tables_.size()));
        degree_ *= deg;
      }
      tables_.push_back(build_factor(g));
    }
    if (walked_.empty()) degree_ = 1;  // single self-loop move

    state_stride_.assign(tables_.size(), 1);
    for (std::size_t i = tables_.size(); i-- > 1;)
      state_stride_[i - 1] = state_stride_[i] * tables_[i].vcount;

    edge_stride_.assign(walked_.size(), 1);
    for (std::size_t i = walked_.size(); i-- > 1;)
      edge_stride_[i - 1] =
          edge_stride_[i] * tables_[static_cast<std::size_t>(walked_[i])].deg;
  }

  int num_factors() const { return static_cast<int>(tables_.size()); }
  const JohnsonGraph& factor(int i) const {
    return tables_[static_cast<std::size_t>(i)].graph;
  }
  std::int64_t num_states() const { return num_states_; }
  std::int64_t degree() const { return degree_; }
  bool has_walked_factor() const { return !walked_.empty(); }

  std::int64_t factor_vertex(std::int64_t state, int i) const {
    return (state / state_stride_[static_cast<std::size_t>(i)]) %
           tables_[static_cast<std::size_t>(i)].vcount;
  }

  std::int64_t neighbor(std::int64_t state, std::int64_t edge) const {
    std::int64_t out = state;
    for (std::size_t w = 0; w < walked_.size(); ++w) {
      const int i = walked_[w];
      const FactorTable& t = tables_[static_cast<std::size_t>(i)];
      const std::int64_t v = factor_vertex(state, i);
      const std::int64_t e = (edge / edge_stride_[w]) % t.deg;
      const std::int64_t v2 = t.adj[static_cast<std::size_t>(v * t.deg + e)];
      out += (v2 - v) * state_stride_[static_cast<std::size_t>(i)];
    }
    return out;
  }

  // Edge index of the reversed edge, local to the neighbor vertex.
  std::int64_t reverse_edge_index(std::int64_t state, std::int64_t edge) const {
    std::int64_t out = 0;
    for (std::size_t w = 0; w < walked_.size(); ++w) {
      const int i = walked_[w];
      const FactorTable& t = tables_[static_cast<std::size_t>(i)];
      const std::int64_t v = factor_vertex(state, i);
      const std::int64_t e = (edge / edge_stride_[w]) % t.deg;
      out += static_cast<std::int64_t>(t.rev[static_cast<std::size_t>(v * t.deg + e)]) *
             edge_stride_[w];
    }
    return out;
  }

  // Per-factor sorted subsets (local element ids) carried by a state.
  std::vector<std::vector<std::int64_t>> state_subsets(std::int64_t state) const {
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(tables_.size());
    for (int i = 0; i < num_factors(); ++i) {
      const FactorTable& t = tables_[static_cast<std::size_t>(i)];
      const std::int64_t v = factor_vertex(state, i);
      std::vector<std::int64_t> subset(static_cast<std::size_t>(t.graph.k));
      for (std::int64_t j = 0; j < t.graph.k; ++j)
        subset[static_cast<std::size_t>(j)] =
            t.subsets[static_cast<std::size_t>(v * t.graph.k + j)];
      out.push_back(std::move(subset));
    }
    return out;
  }

 private:
  struct FactorTable {
    JohnsonGraph graph;
    std::int64_t vcount = 1;
    std::int64_t deg = 0;
    std::vector<std::int32_t> subsets;  // [v*k + i], sorted members
    std::vector<std::int32_t> adj;      // [v*deg + e] -> neighbor vertex
    std::vector<std::int32_t> rev;      // [v*deg + e] -> local edge back
  };

  static FactorTable build_factor(const JohnsonGraph& g) {
    FactorTable t{g, g.vertex_count(), g.degree(), {}, {}, {}};
    const std::int64_t n = g.n, k = g.k;
    t.subsets.resize(static_cast<std::size_t>(t.vcount * std::max<std::int64_t>(k, 1)));
    if (k > 0) {
      std::vector<std::int32_t> cur(static_cast<std::size_t>(k));
      for (std::int64_t i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] =
          static_cast<std::int32_t>(i);
      std::int64_t v = 0;
      do {
        std::copy(cur.begin(), cur.end(), t.subsets.begin() + v * k);
        ++v;
      } while (next_subset(cur.data(), n, k));
    }
    if (t.deg == 0) return t;

    t.adj.resize(static_cast<std::size_t>(t.vcount * t.deg));
    t.rev.resize(static_cast<std::size_t>(t.vcount * t.deg));
    std::vector<std::int32_t> nonmembers(static_cast<std::size_t>(n - k));
    std::vector<std::int32_t> scratch(static_cast<std::size_t>(k));
    for (std::int64_t v = 0; v < t.vcount; ++v) {
      const std::int32_t* S = t.subsets.data() + v * k;
      {
        std::int64_t m = 0, x = 0;
        for (std::int64_t i = 0; i < n; ++i) {
          if (m < k && S[m] == i)
            ++m;
          else
            nonmembers[static_cast<std::size_t>(x++)] = static_cast<std::int32_t>(i);
        }
      }
      for (std::int64_t a = 0; a < k; ++a) {
        for (std::int64_t b = 0; b < n - k; ++b) {
          const std::int32_t removed = S[a];
          const std::int32_t added = nonmembers[static_cast<std::size_t>(b)];
          // neighbor subset, kept sorted
          std::int64_t m = 0;
          for (std::int64_t i = 0; i < k; ++i)
            if (i != a) scratch[static_cast<std::size_t>(m++)] = S[i];
          const auto it = std::lower_bound(scratch.begin(),
                                           scratch.begin() + (k - 1), added);
          const std::int64_t add_pos = it - scratch.begin();
          for (std::int64_t i = k - 1; i > add_pos; --i)
            scratch[static_cast<std::size_t>(i)] = scratch[static_cast<std::size_t>(i - 1)];
          scratch[static_cast<std::size_t>(add_pos)] = added;

          const std::int64_t v2 = subset_rank({scratch.data(),
                                               static_cast<std::size_t>(k)}, n);
          // local reverse edge: remove `added` (member of v2), insert `removed`
          std::int64_t removed_nm_pos = removed;
          for (std::int64_t i = 0; i < k; ++i)
            if (scratch[static_cast<std::size_t>(i)] < removed) --removed_nm_pos;
            else break;
          const std::int64_t idx = v * t.deg + a * (n - k) + b;
          t.adj[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(v2);
          t.rev[static_cast<std::size_t>(idx)] =
              static_cast<std::int32_t>(add_pos * (n - k) + removed_nm_pos);
        }
      }
    }
    return t;
  }

  std::vector<FactorTable> tables_;
  std::vector<int> walked_;
  std::int64_t num_states_ = 1;
  std::int64_t degree_ = 1;
  std::vector<std::int64_t> state_stride_;
  std::vector<std::int64_t> edge_stride_;
};

// All product-neighbors of a state, each with probability 1 / degree. The
// degenerate all-frozen chain reports its single self-loop move.
inline std::vector<std::pair<std::int64_t, double>> neighbors(const ProductChain& chain,
                                                              std::int64_t state) {
  if (state < 0 || state >= chain.num_states())
    throw std::out_of_range("neighbors: state outside the chain");
  const std::int64_t r = chain.degree();
  const double p = 1.0 / static_cast<double>(r);
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(static_cast<std::size_t>(r));
  if (!chain.has_walked_factor()) {
    out.emplace_back(state, 1.0);
    return out;
  }
  for (std::int64_t e = 0; e < r; ++e) out.emplace_back(chain.neighbor(state, e), p);
  return out;
}

// Dense symmetric eigendecomposition of the explicit transition matrix.
inline Spectrum brute_force_spectrum(const ProductChain& chain,
                                     std::int64_t state_cap = 5000) {
  const std::int64_t V = chain.num_states();
  if (V > state_cap)
    throw SizeCapError("brute_force_spectrum: state count exceeds the cap");

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(V, V);
  if (!chain.has_walked_factor()) {
    P.setIdentity();
  } else {
    const std::int64_t r = chain.degree();
    const double p = 1.0 / static_cast<double>(r);
    for (std::int64_t v = 0; v < V; ++v)
      for (std::int64_t e = 0; e < r; ++e) P(v, chain.neighbor(v, e)) += p;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(P, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("brute_force_spectrum: eigensolver failed");
  const Eigen::VectorXd evs = solver.eigenvalues();  // ascending

  Spectrum spec;
  spec.lines.reserve(static_cast<std::size_t>(V));
  for (std::int64_t i = V - 1; i >= 0; --i)
    spec.lines.push_back(SpectralLine{evs[i], 1});
  spec.gap = V >= 2 ? 1.0 - std::max(std::abs(evs[V - 2]), std::abs(evs[0])) : 1.0;
  return spec;
}

}  // namespace clawsim
