#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "clawsim/clawsim.hpp"

using namespace clawsim;

namespace {

const MarkedPredicate kNone = [](std::int64_t) { return false; };
const MarkedPredicate kAll = [](std::int64_t) { return true; };

std::vector<Amplitude> random_unit_vector(SplitMix64& g, std::int64_t n) {
  std::vector<Amplitude> v(static_cast<std::size_t>(n));
  double norm2 = 0.0;
  for (Amplitude& a : v) {
    a = {uniform_unit(g) - 0.5, uniform_unit(g) - 0.5};
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (Amplitude& a : v) a *= inv;
  return v;
}

double squared_norm(const std::vector<Amplitude>& v) {
  double s = 0.0;
  for (const Amplitude& a : v) s += std::norm(a);
  return s;
}

double max_abs_diff(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("edge superposition is uniform and normalized") {
  SUBCASE("single factor J(4,2)") {
    const ProductChain chain({JohnsonGraph(4, 2)});
    const WalkSpace ws(chain, kNone);
    CHECK(ws.num_edges() == 24);
    const WalkState st = prepare_edge_superposition(ws);
    const double expect = 1.0 / std::sqrt(24.0);
    for (std::int64_t e = 0; e < 24; ++e)
      CHECK(std::abs(st.sector(0)[static_cast<std::size_t>(e)] - Amplitude{expect, 0.0}) <
            1e-12);
    CHECK(st.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("product J(4,2) x J(4,2)") {
    const ProductChain chain({JohnsonGraph(4, 2), JohnsonGraph(4, 2)});
    const WalkSpace ws(chain, kNone);
    CHECK(ws.num_edges() == 576);
    const WalkState st = prepare_edge_superposition(ws);
    CHECK(std::abs(st.sector(0)[0] - Amplitude{1.0 / 24.0, 0.0}) < 1e-12);
    CHECK(st.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("edge cap is enforced") {
    const ProductChain chain({JohnsonGraph(8, 4), JohnsonGraph(8, 4)});
    CHECK_THROWS_AS(WalkSpace(chain, kNone, 1024), SizeCapError);
  }
}

TEST_CASE("walk operator fixes the uniform state when nothing is marked") {
  const ProductChain chain({JohnsonGraph(5, 2), JohnsonGraph(4, 2)});
  const WalkSpace ws(chain, kNone);
  WalkState st = prepare_edge_superposition(ws);
  const std::vector<Amplitude> before(st.sector(0).begin(), st.sector(0).end());
  for (int i = 0; i < 5; ++i) apply_walk_operator(ws, st.sector(0));
  CHECK(max_abs_diff({st.sector(0).begin(), st.sector(0).end()}, before) < 1e-9);
}

TEST_CASE("walk operator is unitary") {
  const ProductChain chains[] = {ProductChain({JohnsonGraph(4, 2)}),
                                 ProductChain({JohnsonGraph(4, 2), JohnsonGraph(4, 2)}),
                                 ProductChain({JohnsonGraph(2, 2), JohnsonGraph(6, 2)})};
  SplitMix64 g(31);
  for (const ProductChain& chain : chains) {
    const WalkSpace ws(chain, [](std::int64_t v) { return v % 5 == 0; });
    for (int i = 0; i < 100; ++i) {
      std::vector<Amplitude> v = random_unit_vector(g, ws.num_edges());
      apply_walk_operator(ws, {v.data(), v.size()});
      CHECK(std::abs(squared_norm(v) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("reflections square to the identity") {
  const ProductChain chain({JohnsonGraph(5, 2), JohnsonGraph(4, 2)});
  const WalkSpace ws(chain, [](std::int64_t v) { return v % 3 == 0; });
  SplitMix64 g(32);
  for (int i = 0; i < 25; ++i) {
    const std::vector<Amplitude> original = random_unit_vector(g, ws.num_edges());
    std::vector<Amplitude> v = original;
    reflect_tail_coherent(ws, {v.data(), v.size()});
    reflect_tail_coherent(ws, {v.data(), v.size()});
    CHECK(max_abs_diff(v, original) < 1e-9);
    reflect_head_coherent(ws, {v.data(), v.size()});
    reflect_head_coherent(ws, {v.data(), v.size()});
    CHECK(max_abs_diff(v, original) < 1e-9);
  }
}

TEST_CASE("coherent-state projector behaviour") {
  // With nothing marked the tail reflection is 2C - I globally.
  const ProductChain chain({JohnsonGraph(4, 2)});
  const WalkSpace ws(chain, kNone);
  const std::int64_t r = ws.degree();

  SUBCASE("C fixes each coherent state") {
    for (std::int64_t v = 0; v < ws.num_states(); ++v) {
      std::vector<Amplitude> state(static_cast<std::size_t>(ws.num_edges()), {0, 0});
      for (std::int64_t e = 0; e < r; ++e)
        state[static_cast<std::size_t>(v * r + e)] = {1.0 / std::sqrt(double(r)), 0.0};
      std::vector<Amplitude> reflected = state;
      reflect_tail_coherent(ws, {reflected.data(), reflected.size()});
      CHECK(max_abs_diff(reflected, state) < 1e-9);  // (2C-I)|c> = |c>
    }
  }
  SUBCASE("C annihilates vectors orthogonal to every coherent state") {
    std::vector<Amplitude> state(static_cast<std::size_t>(ws.num_edges()), {0, 0});
    state[0] = {1.0 / std::sqrt(2.0), 0.0};
    state[1] = {-1.0 / std::sqrt(2.0), 0.0};
    std::vector<Amplitude> reflected = state;
    reflect_tail_coherent(ws, {reflected.data(), reflected.size()});
    for (std::size_t i = 0; i < state.size(); ++i)
      CHECK(std::abs(reflected[i] + state[i]) < 1e-9);  // (2C-I)v = -v on ker C
  }
}

TEST_CASE("all-marked walk acts as the identity on the walk register") {
  const ProductChain chain({JohnsonGraph(4, 2), JohnsonGraph(4, 2)});
  const WalkSpace ws(chain, kAll);
  SplitMix64 g(33);
  const std::vector<Amplitude> original = random_unit_vector(g, ws.num_edges());
  std::vector<Amplitude> v = original;
  apply_walk_operator(ws, {v.data(), v.size()});
  CHECK(max_abs_diff(v, original) < 1e-9);
}

TEST_CASE("detection outcomes") {
  SUBCASE("no marked states: false for every walk length, not sampled") {
    const ProductChain chain({JohnsonGraph(5, 2), JohnsonGraph(5, 2)});
    const WalkSpace ws(chain, kNone);
    const std::vector<double> profile = detect_success_profile(ws, 12);
    for (const double p : profile) CHECK(p <= 1e-9);
    SplitMix64 g(34);
    for (int i = 0; i < 50; ++i) CHECK_FALSE(detect_once(ws, 12, g));
  }
  SUBCASE("all marked: true with probability 1 at one step") {
    const ProductChain chain({JohnsonGraph(4, 2)});
    const WalkSpace ws(chain, kAll);
    CHECK(detect_success_probability(ws, 1) == doctest::Approx(1.0).epsilon(1e-12));
    SplitMix64 g(35);
    for (int i = 0; i < 20; ++i) CHECK(detect_once(ws, 1, g));
  }
  SUBCASE("calibrated single-claw instance clears two thirds") {
    const ProblemInstance inst = make_planted_instance({4, 4}, 1, 64, 4);
    const std::vector<std::int64_t> subsets{2, 2};
    const DetectParams params = make_detect_params(inst.domain_sizes(), subsets, 1.0);
    const double p =
        [&] {
          const auto profile =
              claw_detect_success_profile(inst, inst.full_domains(), params);
          double s = 0.0;
          for (const double x : profile) s += x;
          return s / static_cast<double>(profile.size());
        }();
    CHECK(p >= 2.0 / 3.0);
  }
  SUBCASE("invalid step bound") {
    const ProductChain chain({JohnsonGraph(4, 2)});
    const WalkSpace ws(chain, kNone);
    SplitMix64 g(36);
    CHECK_THROWS_AS(detect_once(ws, 0, g), std::invalid_argument);
    CHECK_THROWS_AS(detect_success_profile(ws, 0), std::invalid_argument);
  }
}

TEST_CASE("success probability is measured, not asserted, to be monotone") {
  const ProductChain chain({JohnsonGraph(5, 2), JohnsonGraph(5, 2)});
  const WalkSpace smaller(chain, [](std::int64_t v) { return v % 11 == 0; });
  const WalkSpace larger(chain, [](std::int64_t v) { return v % 11 == 0 || v % 7 == 0; });
  for (const std::int64_t bound : {3, 6, 12}) {
    const double ps = detect_success_probability(smaller, bound);
    const double pl = detect_success_probability(larger, bound);
    // Exploratory measurement: flag reversals without failing the suite.
    WARN_MESSAGE(pl >= ps - 1e-9, "marked-superset success dipped below subset at bound ",
                 bound, ": ", pl, " < ", ps);
  }
}

TEST_CASE("walk operator matches a dense build from coherent-state projectors") {
  // Independent construction: assemble both reflections as explicit matrices
  // straight from the definitions and compare column by column.
  const ProductChain chain({JohnsonGraph(5, 2)});
  const MarkedPredicate marked = [](std::int64_t v) { return v % 4 == 0; };
  const WalkSpace ws(chain, marked);
  const std::int64_t E = ws.num_edges();
  const std::int64_t V = ws.num_states();
  const std::int64_t r = ws.degree();

  SUBCASE("reverse-edge table is an involution linking heads to tails") {
    for (std::int64_t idx = 0; idx < E; ++idx) {
      CHECK(ws.reverse(ws.reverse(idx)) == idx);
      CHECK(ws.head(ws.reverse(idx)) == ws.tail(idx));
      CHECK(ws.tail(ws.reverse(idx)) == ws.head(idx));
    }
  }

  Eigen::MatrixXcd tail_ref = Eigen::MatrixXcd::Identity(E, E);
  Eigen::MatrixXcd head_ref = Eigen::MatrixXcd::Identity(E, E);
  for (std::int64_t v = 0; v < V; ++v) {
    if (ws.is_marked(v)) {
      for (std::int64_t e = 0; e < r; ++e) {
        tail_ref(v * r + e, v * r + e) = -1.0;
        const std::int64_t in = ws.reverse(v * r + e);
        head_ref(in, in) = -1.0;
      }
      continue;
    }
    for (std::int64_t e1 = 0; e1 < r; ++e1) {
      for (std::int64_t e2 = 0; e2 < r; ++e2) {
        tail_ref(v * r + e1, v * r + e2) =
            2.0 / static_cast<double>(r) - (e1 == e2 ? 1.0 : 0.0);
        head_ref(ws.reverse(v * r + e1), ws.reverse(v * r + e2)) =
            2.0 / static_cast<double>(r) - (e1 == e2 ? 1.0 : 0.0);
      }
    }
  }
  const Eigen::MatrixXcd walk_ref = head_ref * tail_ref;

  SUBCASE("column-by-column agreement") {
    double worst = 0.0;
    for (std::int64_t c = 0; c < E; ++c) {
      std::vector<Amplitude> col(static_cast<std::size_t>(E), {0.0, 0.0});
      col[static_cast<std::size_t>(c)] = {1.0, 0.0};
      apply_walk_operator(ws, {col.data(), col.size()});
      for (std::int64_t row = 0; row < E; ++row)
        worst = std::max(worst,
                         std::abs(col[static_cast<std::size_t>(row)] - walk_ref(row, c)));
    }
    CHECK(worst < 1e-12);
  }

  SUBCASE("success profile agrees with dense matrix powers") {
    const double a0 = 1.0 / std::sqrt(static_cast<double>(E));
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Constant(E, a0);
    Eigen::VectorXcd psi = phi0;
    const std::vector<double> profile = detect_success_profile(ws, 8);
    for (std::int64_t t = 1; t <= 8; ++t) {
      psi = walk_ref * psi;
      double expect = 0.0;
      for (std::int64_t e = 0; e < E; ++e) {
        expect += std::norm(0.5 * (phi0(e) - psi(e)));
        if (ws.edge_touches_marked(e)) expect += std::norm(0.5 * (phi0(e) + psi(e)));
      }
      CHECK(std::abs(profile[static_cast<std::size_t>(t - 1)] - expect) < 1e-12);
    }
  }
}

TEST_CASE("degenerate all-frozen chain detects by classical sampling") {
  const ProductChain chain({JohnsonGraph(2, 2), JohnsonGraph(3, 3)});
  CHECK(chain.num_states() == 1);
  SUBCASE("marked") {
    const WalkSpace ws(chain, kAll);
    CHECK(detect_success_probability(ws, 3) == doctest::Approx(1.0));
  }
  SUBCASE("unmarked") {
    const WalkSpace ws(chain, kNone);
    CHECK(detect_success_probability(ws, 3) <= 1e-12);
  }
}
