#include <doctest.h>

#include <vector>

#include "mfpm/oracle.hpp"
#include "support.hpp"

using namespace mfpm;

TEST_SUITE("oracle") {
  TEST_CASE("exact profit of small instances") {
    auto one = test::one_edge(0.5);
    auto mlg1 = build_multi_level(one);
    CHECK(exact_P(one, mlg1, {}) == 0.0);
    CHECK(exact_P(one, mlg1, std::vector<NodeId>{0}) == doctest::Approx(1.5));
    CHECK(exact_P(one, mlg1, std::vector<NodeId>{1}) == doctest::Approx(1.0));

    auto two = test::two_feature();
    auto mlg2 = build_multi_level(two);
    CHECK(exact_P(two, mlg2, std::vector<NodeId>{0}) == doctest::Approx(1.85));
  }

  TEST_CASE("enumeration limits") {
    auto net = test::path3(0.5);
    auto mlg = build_multi_level(net);
    CHECK_NOTHROW(exact_P(net, mlg, std::vector<NodeId>{0}, {2}));
    CHECK_THROWS_AS(exact_P(net, mlg, std::vector<NodeId>{0}, {1}), EnumerationError);
    CHECK_THROWS_AS(exact_P(net, mlg, std::vector<NodeId>{0}, {26}), EnumerationError);
  }

  TEST_CASE("empty partial realization gives exact_P of the singleton") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      auto net = test::random_instance(rng, 4, 2, 10);
      auto mlg = build_multi_level(net);
      PartialRealization empty(net, mlg);
      for (NodeId u = 0; u < net.node_count(); ++u) {
        std::vector<NodeId> s{u};
        CHECK(exact_delta(net, mlg, empty, u) == doctest::Approx(exact_P(net, mlg, s)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("conditional marginals on a path") {
    auto net = test::path3(1.0);
    auto mlg = build_multi_level(net);
    PartialRealization partial(net, mlg);
    HashedOutcomes world(1);
    observe(partial, mlg, net, 0, world);
    CHECK(exact_delta(net, mlg, partial, 1) == 0.0);
    CHECK(exact_delta(net, mlg, partial, 2) == 0.0);
    CHECK_THROWS(exact_delta(net, mlg, partial, 0));

    // p = 0.5 with a -> b observed blocked: c is reached by b with probability 0.5.
    auto half = test::path3(0.5);
    auto mlgh = build_multi_level(half);
    FullRealization blocked(mlgh.edge_count(), false);
    FixedOutcomes none(blocked);
    PartialRealization ph(half, mlgh);
    observe(ph, mlgh, half, 0, none);
    CHECK(ph.state(0) == EdgeState::blocked);
    CHECK(ph.state(1) == EdgeState::unknown);
    CHECK(exact_delta(half, mlgh, ph, 1) == doctest::Approx(1.5));
    CHECK(exact_delta(half, mlgh, ph, 2) == doctest::Approx(1.0));
  }

  TEST_CASE("optimum under a budget") {
    auto one = test::one_edge(0.5);
    auto mlg = build_multi_level(one);
    auto opt = exact_optimum(one, mlg, 1.0);
    CHECK(opt.seeds == std::vector<NodeId>{0});
    CHECK(opt.value == doctest::Approx(1.5));

    auto all = exact_optimum(one, mlg, 10.0);
    CHECK(all.seeds == std::vector<NodeId>{0, 1});
    CHECK(all.value == doctest::Approx(one.total_profit()));

    auto nothing = exact_optimum(one, mlg, 0.0);
    CHECK(nothing.seeds.empty());
    CHECK(nothing.value == 0.0);
  }

  TEST_CASE("profit is monotone and submodular on random instances") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      auto net = test::random_instance(rng, 5, 2, 12);
      auto mlg = build_multi_level(net);
      const std::uint32_t n = net.node_count();
      std::vector<double> p(1u << n);
      for (std::uint32_t mask = 0; mask < p.size(); ++mask) {
        std::vector<NodeId> s;
        for (NodeId u = 0; u < n; ++u) {
          if (mask >> u & 1) s.push_back(u);
        }
        p[mask] = exact_P(net, mlg, s);
      }
      int violations = 0;
      for (std::uint32_t t = 0; t < p.size(); ++t) {
        for (std::uint32_t s = t;; s = (s - 1) & t) {
          if (p[s] > p[t] + 1e-9) ++violations;
          for (NodeId u = 0; u < n; ++u) {
            if (t >> u & 1) continue;
            double gs = p[s | 1u << u] - p[s];
            double gt = p[t | 1u << u] - p[t];
            if (gs < gt - 1e-9) ++violations;
          }
          if (s == 0) break;
        }
      }
      CHECK(violations == 0);
    }
  }
}
