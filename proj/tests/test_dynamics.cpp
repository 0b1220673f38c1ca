#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nlvoter/dynamics.hpp"
#include "nlvoter/graph.hpp"
#include "nlvoter/observables.hpp"
#include "oracles.hpp"

using namespace nlvoter;

namespace {

UpdateStream stream_for(std::uint64_t seed, std::uint32_t r = 0) {
  return UpdateStream(derive_stream(seed, StreamPurpose::dynamics, 0, 0, r));
}

OpinionState uniform_state(std::size_t n, Opinion o) {
  OpinionState s;
  s.opinions.assign(n, o);
  return s;
}

const Alpha kAlphas[] = {Alpha::finite(0.0),  Alpha::finite(0.5), Alpha::finite(1.0),
                         Alpha::finite(1.1),  Alpha::finite(2.0), Alpha::finite(5.0),
                         Alpha::finite(-1.5), Alpha::finite(8.0), Alpha::finite(-8.0),
                         Alpha::infinity()};

}  // namespace

TEST_CASE("Alpha parsing and range") {
  CHECK(Alpha::parse("inf").is_infinite());
  CHECK(Alpha::parse("infinity").is_infinite());
  CHECK(Alpha::parse("1.1").value() == 1.1);
  CHECK(Alpha::infinity().value() == std::numeric_limits<double>::infinity());
  CHECK(Alpha::finite(0.0).absorbing() == false);
  CHECK(Alpha::finite(-1.0).absorbing() == false);
  CHECK(Alpha::finite(0.1).absorbing());
  CHECK(Alpha::infinity().absorbing());
  CHECK(Alpha::finite(-8.0).value() == -8.0);
  CHECK_THROWS_AS(Alpha::finite(8.5), std::invalid_argument);
  CHECK_THROWS_AS(Alpha::finite(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(Alpha::parse("two"), std::invalid_argument);
  CHECK_THROWS_AS(Alpha::parse("1.0x"), std::invalid_argument);
  CHECK(Alpha::parse(Alpha::finite(1.3).to_string()) == Alpha::finite(1.3));
  CHECK(Alpha::parse(Alpha::infinity().to_string()) == Alpha::infinity());
}

TEST_CASE("select_prob examples") {
  CHECK(select_prob({3, 2}, Alpha::finite(1.0)) == 0.6);
  CHECK(select_prob({3, 2}, Alpha::finite(2.0)) == doctest::Approx(9.0 / 13.0).epsilon(1e-15));
  CHECK(select_prob({3, 2}, Alpha::infinity()) == 1.0);
  CHECK(select_prob({2, 3}, Alpha::infinity()) == 0.0);
  CHECK(select_prob({0, 5}, Alpha::finite(2.0)) == 0.0);
  CHECK(select_prob({5, 0}, Alpha::finite(2.0)) == 1.0);
  for (const auto& a : kAlphas) {
    for (std::uint32_t k = 1; k <= 6; ++k) CHECK(select_prob({k, k}, a) == 0.5);
  }
  CHECK_THROWS_AS(select_prob({0, 0}, Alpha::finite(1.0)), std::invalid_argument);
}

TEST_CASE("select_prob edge conventions") {
  SUBCASE("alpha = 0 is a fair coin even with a zero count") {
    CHECK(select_prob({0, 5}, Alpha::finite(0.0)) == 0.5);
    CHECK(select_prob({4, 1}, Alpha::finite(0.0)) == 0.5);
  }
  SUBCASE("alpha < 0 lets a zero-count opinion win") {
    CHECK(select_prob({0, 5}, Alpha::finite(-1.0)) == 1.0);
    CHECK(select_prob({5, 0}, Alpha::finite(-1.0)) == 0.0);
  }
  SUBCASE("infinity with one side empty") {
    CHECK(select_prob({0, 5}, Alpha::infinity()) == 0.0);
    CHECK(select_prob({5, 0}, Alpha::infinity()) == 1.0);
  }
}

TEST_CASE("select_prob matches the power form and is normalized") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::uint32_t> count(1, 40);
  std::uniform_real_distribution<double> alpha(-8.0, 8.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::uint32_t p = count(rng), m = count(rng);
    const auto a = Alpha::finite(alpha(rng));
    const double got = select_prob({p, m}, a);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
    CHECK(got == doctest::Approx(oracle::direct_select_prob(p, m, a.value())).epsilon(1e-12));
    // p_plus(n+, n-) + p_plus(n-, n+) = 1
    CHECK(got + select_prob({m, p}, a) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("select_prob: alpha = 1 is exact division") {
  for (std::uint32_t p = 0; p <= 30; ++p) {
    for (std::uint32_t m = 0; m <= 30; ++m) {
      if (p + m == 0) continue;
      CHECK(select_prob({p, m}, Alpha::finite(1.0)) ==
            static_cast<double>(p) / static_cast<double>(p + m));
    }
  }
}

TEST_CASE("select_prob is monotone in n_plus for alpha > 0, reversed for alpha < 0") {
  for (double av : {0.3, 1.0, 2.5, -0.7, -3.0}) {
    const auto a = Alpha::finite(av);
    for (std::uint32_t total = 2; total <= 12; ++total) {
      for (std::uint32_t p = 1; p + 1 < total; ++p) {
        const double lo = select_prob({p, total - p}, a);
        const double hi = select_prob({p + 1, total - p - 1}, a);
        if (av > 0) {
          CHECK(hi > lo);
        } else {
          CHECK(hi < lo);
        }
      }
    }
  }
}

TEST_CASE("SelectionTable reproduces select_prob") {
  for (const auto& a : kAlphas) {
    const SelectionTable t(a, 9);
    CHECK(t.max_degree() == 9);
    for (std::uint32_t total = 1; total <= 10; ++total) {
      for (std::uint32_t p = 0; p <= total; ++p) CHECK(t(total, p) == select_prob({p, total - p}, a));
    }
  }
}

TEST_CASE("init_random") {
  SUBCASE("mean over seeds is one half") {
    // 200 seeds of N = 2500: sd of the pooled mean is 0.5 / sqrt(500000).
    const int seeds = 200;
    double total = 0.0;
    for (int s = 0; s < seeds; ++s) total += rho_plus(init_random(2500, stream_for(s)));
    CHECK(std::abs(total / seeds - 0.5) < 3.0 * 0.5 / std::sqrt(2500.0 * seeds));
  }
  SUBCASE("per-seed spread is binomial") {
    int inside = 0;
    for (int s = 0; s < 200; ++s) {
      inside += std::abs(rho_plus(init_random(2500, stream_for(s))) - 0.5) <= 3.0 * 0.01;
    }
    CHECK(inside >= 194);
  }
  SUBCASE("deterministic and well-formed") {
    const auto a = init_random(101, stream_for(9));
    CHECK(a == init_random(101, stream_for(9)));
    CHECK_FALSE(a == init_random(101, stream_for(10)));
    CHECK(a.time_step == 0);
    for (Opinion o : a.opinions) CHECK((o == 1 || o == -1));
    const auto one = init_random(1, stream_for(1));
    CHECK(one.size() == 1);
  }
  SUBCASE("independent of the update draws") {
    // Same stream: the first update step does not replay the initial coin flips.
    const auto s = stream_for(12);
    const auto g = make_lattice(20);
    const auto init = init_random(400, s);
    const auto next = step_sync(init, g, Alpha::finite(0.0), s);
    CHECK_FALSE(next.opinions == init.opinions);
  }
}

TEST_CASE("init_block") {
  const auto s = init_block(50, 30);
  CHECK(s.count_plus() == 900);
  CHECK(rho_plus(s) == 0.36);
  for (std::uint32_t r = 0; r < 50; ++r) {
    for (std::uint32_t c = 0; c < 50; ++c) {
      const bool inside = r >= 10 && r < 40 && c >= 10 && c < 40;
      CHECK(s.opinions[r * 50 + c] == (inside ? 1 : -1));
    }
  }
  CHECK(rho_plus(init_block(50, 50)) == 1.0);
  const auto small = init_block(3, 1);
  CHECK(small.count_plus() == 1);
  CHECK(small.opinions[4] == 1);
  CHECK_THROWS_AS(init_block(10, 11), std::invalid_argument);
  CHECK_THROWS_AS(init_block(10, 0), std::invalid_argument);
}

TEST_CASE("init_stripes") {
  const auto s = init_stripes(12, 3);
  CHECK(s.count_plus() == 72);
  CHECK(s.opinions[0] == 1);
  CHECK(s.opinions[3 * 12] == -1);
  CHECK(s.opinions[6 * 12 + 5] == 1);
  CHECK_THROWS_AS(init_stripes(10, 3), std::invalid_argument);
  CHECK_THROWS_AS(init_stripes(10, 0), std::invalid_argument);
}

TEST_CASE("step_sync: consensus is absorbing for alpha > 0") {
  const auto g = make_lattice(10);
  for (double av : {0.2, 1.0, 2.0, 7.5}) {
    for (Opinion o : {Opinion{1}, Opinion{-1}}) {
      auto s = uniform_state(100, o);
      for (int t = 0; t < 20; ++t) s = step_sync(s, g, Alpha::finite(av), stream_for(5));
      CHECK(s.opinions == uniform_state(100, o).opinions);
      CHECK(s.time_step == 20);
    }
  }
  auto s = uniform_state(100, 1);
  s = step_sync(s, g, Alpha::infinity(), stream_for(5));
  CHECK(s.count_plus() == 100);
}

TEST_CASE("step_sync: stripes of width >= 2 are frozen under the majority rule") {
  const auto g = make_lattice(40);
  for (std::uint32_t width : {2u, 4u, 5u, 10u}) {
    auto s = init_stripes(40, width);
    const auto start = s.opinions;
    for (int t = 0; t < 50; ++t) s = step_sync(s, g, Alpha::infinity(), stream_for(t));
    CHECK(s.opinions == start);
  }
}

TEST_CASE("step_sync: alpha = 0 draws fair coins") {
  const auto g = make_lattice(50);
  auto s = uniform_state(2500, 1);
  std::size_t plus = 0, agree = 0;
  const int steps = 40;
  for (int t = 0; t < steps; ++t) {
    const auto next = step_sync(s, g, Alpha::finite(0.0), stream_for(3));
    plus += next.count_plus();
    for (std::size_t i = 0; i < 2500; ++i) agree += next.opinions[i] == s.opinions[i];
    s = next;
  }
  const double n = 2500.0 * steps;
  const double sd = 0.5 / std::sqrt(n);
  CHECK(std::abs(static_cast<double>(plus) / n - 0.5) < 4.0 * sd);
  CHECK(std::abs(static_cast<double>(agree) / n - 0.5) < 4.0 * sd);
}

TEST_CASE("step_sync: alpha = 1 adoption frequency equals the local fraction") {
  // Centre node of a star with 3 of its 7 neighbours +1 (node itself -1): p = 3/8.
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 1; v <= 7; ++v) e.emplace_back(0, v);
  const auto g = Graph::from_edges(8, e, Topology::er);
  OpinionState s;
  s.opinions = {-1, 1, 1, 1, -1, -1, -1, -1};
  int hits = 0;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) {
    s.time_step = static_cast<std::uint64_t>(t);
    hits += step_sync(s, g, Alpha::finite(1.0), stream_for(8)).opinions[0] == 1;
  }
  const double sd = std::sqrt(0.375 * 0.625 / trials);
  CHECK(std::abs(hits / static_cast<double>(trials) - 0.375) < 4.0 * sd);
}

TEST_CASE("blocked kernel matches the serial reference bit for bit") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng() % 60);
    const double p = 0.02 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
    const auto g = oracle::random_graph(n, p, rng);
    auto s = oracle::random_state(n, 0.5, rng);
    for (const auto& a : kAlphas) {
      auto ref = s;
      auto fast = s;
      const auto st = stream_for(static_cast<std::uint64_t>(trial));
      const SelectionTable table(a, g.max_degree());
      OpinionState buf;
      buf.opinions.resize(n);
      for (int t = 0; t < 6; ++t) {
        ref = reference::step_sync(ref, g, a, st);
        const auto plus = step_sync(fast, buf, g, table, st, false);
        std::swap(fast, buf);
        CHECK(plus == fast.count_plus());
        REQUIRE(fast == ref);
      }
    }
  }
}

TEST_CASE("parallel kernel equals the serial kernel") {
  const auto g = make_lattice(100);  // 10000 nodes, above the threading cutoff
  const auto st = stream_for(77);
  for (const auto& a : kAlphas) {
    const SelectionTable table(a, g.max_degree());
    auto serial = init_random(g.node_count(), st);
    auto par = serial;
    OpinionState b1, b2;
    b1.opinions.resize(g.node_count());
    b2.opinions.resize(g.node_count());
    for (int t = 0; t < 10; ++t) {
      step_sync(serial, b1, g, table, st, false);
      step_sync(par, b2, g, table, st, true);
      std::swap(serial, b1);
      std::swap(par, b2);
      REQUIRE(serial == par);
    }
    CHECK(serial == [&] {
      auto r = init_random(g.node_count(), st);
      for (int t = 0; t < 10; ++t) r = reference::step_sync(r, g, a, st);
      return r;
    }());
  }
}

TEST_CASE("step_sync argument checks") {
  const auto g = make_lattice(5);
  const auto st = stream_for(1);
  CHECK_THROWS_AS(step_sync(uniform_state(24, 1), g, Alpha::finite(1.0), st),
                  std::invalid_argument);
  const SelectionTable small(Alpha::finite(1.0), 2);
  OpinionState to;
  to.opinions.resize(25);
  CHECK_THROWS_AS(step_sync(uniform_state(25, 1), to, g, small, st), std::invalid_argument);
  CHECK_THROWS_AS(reference::step_sync(uniform_state(3, 1), g, Alpha::finite(1.0), st),
                  std::invalid_argument);
}
