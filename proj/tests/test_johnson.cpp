#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "clawsim/clawsim.hpp"

using namespace clawsim;

namespace {

void check_multisets_close(const std::vector<double>& a, const std::vector<double>& b,
                           double tol) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  CHECK(worst <= tol);
}

}  // namespace

TEST_CASE("johnson spectrum closed form on small graphs") {
  SUBCASE("J(4,2)") {
    const Spectrum s = johnson_spectrum(4, 2);
    REQUIRE(s.lines.size() == 3);
    CHECK(s.lines[0].eigenvalue == doctest::Approx(1.0));
    CHECK(s.lines[0].multiplicity == 1);
    CHECK(s.lines[1].eigenvalue == doctest::Approx(0.0));
    CHECK(s.lines[1].multiplicity == 3);
    CHECK(s.lines[2].eigenvalue == doctest::Approx(-0.5));
    CHECK(s.lines[2].multiplicity == 2);
    CHECK(s.gap == doctest::Approx(0.5));
    CHECK(s.dimension() == 6);
  }
  SUBCASE("J(6,2)") {
    const Spectrum s = johnson_spectrum(6, 2);
    REQUIRE(s.lines.size() == 3);
    CHECK(s.lines[1].eigenvalue == doctest::Approx(0.25));
    CHECK(s.lines[2].eigenvalue == doctest::Approx(-0.25));
    CHECK(s.gap == doctest::Approx(0.75));
  }
  SUBCASE("principal eigenvalue is exactly 1") {
    for (std::int64_t n = 2; n <= 10; ++n)
      for (std::int64_t k = 1; k < n; ++k)
        CHECK(johnson_spectrum(n, k).lines.front().eigenvalue == 1.0);
  }
  SUBCASE("degenerate J(n,n) is the one-point spectrum") {
    const Spectrum s = johnson_spectrum(5, 5);
    REQUIRE(s.lines.size() == 1);
    CHECK(s.lines[0].eigenvalue == 1.0);
    CHECK(s.gap == 1.0);
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(johnson_spectrum(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(johnson_spectrum(0, 0), std::invalid_argument);
  }
}

TEST_CASE("closed form matches dense eigendecomposition") {
  for (std::int64_t n = 4; n <= 8; ++n) {
    for (std::int64_t k = 2; 2 * k <= n; ++k) {
      const Spectrum closed = johnson_spectrum(n, k);
      const Spectrum brute = brute_force_spectrum(ProductChain({JohnsonGraph(n, k)}));
      check_multisets_close(closed.expanded(), brute.expanded(), 1e-9);
      CHECK(closed.gap == doctest::Approx(brute.gap).epsilon(1e-9));
    }
  }
  SUBCASE("also across the complement symmetry") {
    const Spectrum a = johnson_spectrum(5, 3);
    const Spectrum brute = brute_force_spectrum(ProductChain({JohnsonGraph(5, 3)}));
    check_multisets_close(a.expanded(), brute.expanded(), 1e-9);
  }
}

TEST_CASE("product chain spectra") {
  SUBCASE("product multiset equals pairwise eigenvalue products") {
    const ProductChain chain({JohnsonGraph(4, 2), JohnsonGraph(4, 2)});
    const Spectrum brute = brute_force_spectrum(chain);
    const std::vector<double> f = johnson_spectrum(4, 2).expanded();
    std::vector<double> tensor;
    for (const double a : f)
      for (const double b : f) tensor.push_back(a * b);
    std::sort(tensor.begin(), tensor.end());
    check_multisets_close(tensor, brute.expanded(), 1e-9);
  }
  SUBCASE("one-state degenerate chain") {
    const ProductChain chain({JohnsonGraph(3, 3)});
    const Spectrum s = brute_force_spectrum(chain);
    REQUIRE(s.dimension() == 1);
    CHECK(s.lines[0].eigenvalue == doctest::Approx(1.0));
    CHECK(s.gap == 1.0);
  }
  SUBCASE("state cap is enforced") {
    const ProductChain chain({JohnsonGraph(10, 5), JohnsonGraph(10, 5)});
    CHECK_THROWS_AS(brute_force_spectrum(chain, 5000), SizeCapError);
  }
}

TEST_CASE("product gap is the minimum of factor gaps") {
  SUBCASE("paper rule on derived values") {
    const double gaps[] = {0.5, 0.75};  // J(4,2), J(6,2)
    CHECK(product_gap(gaps) == doctest::Approx(0.5));
  }
  SUBCASE("single factor") {
    const double gaps[] = {0.33};
    CHECK(product_gap(gaps) == doctest::Approx(0.33));
  }
  SUBCASE("ties") {
    const double gaps[] = {0.3, 0.3, 0.3};
    CHECK(product_gap(gaps) == doctest::Approx(0.3));
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(product_gap({}), std::invalid_argument);
  }
  SUBCASE("brute-force product gap equals the minimum rule") {
    const std::pair<JohnsonGraph, JohnsonGraph> products[] = {
        {JohnsonGraph(4, 2), JohnsonGraph(4, 2)},
        {JohnsonGraph(5, 2), JohnsonGraph(4, 2)},
        {JohnsonGraph(6, 2), JohnsonGraph(6, 2)},
        {JohnsonGraph(6, 3), JohnsonGraph(5, 2)},
    };
    for (const auto& [a, b] : products) {
      const ProductChain chain({a, b});
      const double expect = std::min(johnson_spectrum(a.n, a.k).gap,
                                     johnson_spectrum(b.n, b.k).gap);
      CHECK(brute_force_spectrum(chain).gap == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  SUBCASE("frozen factor never drives the minimum") {
    const ProductChain chain({JohnsonGraph(3, 3), JohnsonGraph(6, 2)});
    CHECK(brute_force_spectrum(chain).gap ==
          doctest::Approx(johnson_spectrum(6, 2).gap).epsilon(1e-9));
  }
}

TEST_CASE("neighbors enumerate the product moves uniformly") {
  SUBCASE("J(4,2) around {1,2}") {
    const ProductChain chain({JohnsonGraph(4, 2)});
    const std::int32_t subset[] = {1, 2};
    const std::int64_t state = subset_rank(subset, 4);
    const auto nbrs = neighbors(chain, state);
    REQUIRE(nbrs.size() == 4);
    std::set<std::int64_t> distinct;
    for (const auto& [s, p] : nbrs) {
      CHECK(p == doctest::Approx(0.25));
      distinct.insert(s);
      CHECK(s != state);
    }
    CHECK(distinct.size() == 4);
  }
  SUBCASE("product degree multiplies and every coordinate moves") {
    const ProductChain chain({JohnsonGraph(4, 2), JohnsonGraph(4, 2)});
    const std::int32_t subset[] = {1, 2};
    const std::int64_t coord = subset_rank(subset, 4);
    const std::int64_t state = coord * 6 + coord;  // ({1,2},{1,2})
    const auto nbrs = neighbors(chain, state);
    REQUIRE(nbrs.size() == 16);
    for (const auto& [s, p] : nbrs) {
      CHECK(p == doctest::Approx(1.0 / 16.0));
      CHECK(chain.factor_vertex(s, 0) != coord);
      CHECK(chain.factor_vertex(s, 1) != coord);
    }
  }
  SUBCASE("probabilities sum to one on random states") {
    const ProductChain chain({JohnsonGraph(5, 2), JohnsonGraph(6, 2)});
    SplitMix64 g(8);
    for (int i = 0; i < 20; ++i) {
      const std::int64_t s = static_cast<std::int64_t>(
          uniform_below(g, static_cast<std::uint64_t>(chain.num_states())));
      double total = 0.0;
      for (const auto& [t, p] : neighbors(chain, s)) total += p;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("invalid state is rejected") {
    const ProductChain chain({JohnsonGraph(4, 2)});
    CHECK_THROWS_AS(neighbors(chain, 6), std::out_of_range);
    CHECK_THROWS_AS(neighbors(chain, -1), std::out_of_range);
  }
}

TEST_CASE("transition structure is symmetric and doubly stochastic") {
  const ProductChain chain({JohnsonGraph(5, 2), JohnsonGraph(4, 2)});
  const std::int64_t V = chain.num_states();
  std::vector<double> row(V, 0.0), col(V, 0.0);
  for (std::int64_t v = 0; v < V; ++v) {
    for (const auto& [w, p] : neighbors(chain, v)) {
      row[static_cast<std::size_t>(v)] += p;
      col[static_cast<std::size_t>(w)] += p;
    }
  }
  for (std::int64_t v = 0; v < V; ++v) {
    CHECK(row[static_cast<std::size_t>(v)] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(col[static_cast<std::size_t>(v)] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("reverse edges really reverse") {
    SplitMix64 g(5);
    for (int i = 0; i < 50; ++i) {
      const std::int64_t v = static_cast<std::int64_t>(
          uniform_below(g, static_cast<std::uint64_t>(V)));
      const std::int64_t e = static_cast<std::int64_t>(
          uniform_below(g, static_cast<std::uint64_t>(chain.degree())));
      const std::int64_t w = chain.neighbor(v, e);
      const std::int64_t back = chain.reverse_edge_index(v, e);
      CHECK(chain.neighbor(w, back) == v);
    }
  }
}

TEST_CASE("subset ranking round-trips and enumerates in order") {
  for (const auto [n, k] : {std::pair<std::int64_t, std::int64_t>{6, 3},
                            {7, 2},
                            {8, 5},
                            {5, 1}}) {
    const std::int64_t count = binomial(n, k);
    std::vector<std::int32_t> subset(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i)
      subset[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    std::int64_t rank = 0;
    do {
      CHECK(subset_rank(subset, n) == rank);
      std::vector<std::int32_t> round(static_cast<std::size_t>(k));
      subset_unrank(rank, n, k, round.data());
      CHECK(round == subset);
      ++rank;
    } while (next_subset(subset.data(), n, k));
    CHECK(rank == count);
  }
}

TEST_CASE("integer helpers") {
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK_THROWS_AS(binomial(70, 35), std::overflow_error);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(32) == 5);
  CHECK(ceil_log2(33) == 6);
  CHECK(ceil_log3(1) == 0);
  CHECK(ceil_log3(4) == 2);
  CHECK(ceil_root(4096, 3) == 16);
  CHECK(ceil_root(4097, 3) == 17);
  CHECK(ceil_root(1, 4) == 1);
  CHECK(ceil_root(16777216, 4) == 64);
}

TEST_CASE("gap stays bounded below by a constant over k") {
  // fixed n/k ratios, growing k
  for (std::int64_t ratio = 2; ratio <= 4; ++ratio) {
    for (std::int64_t k = 2; k <= 5; ++k) {
      const Spectrum s = johnson_spectrum(ratio * k, k);
      CHECK(s.gap * static_cast<double>(k) >= 0.99);
    }
  }
}
