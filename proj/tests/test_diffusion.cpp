#include <doctest.h>

#include <vector>

#include "mfpm/diffusion.hpp"
#include "support.hpp"

using namespace mfpm;

TEST_SUITE("diffusion") {
  TEST_CASE("certain edges are always live") {
    auto net = test::path3(1.0);
    auto mlg = build_multi_level(net);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
      auto phi = sample_realization(mlg, rng);
      CHECK(phi.live(0));
      CHECK(phi.live(1));
    }
  }

  TEST_CASE("p = 0.5 edge is live half the time") {
    auto net = test::one_edge(0.5);
    auto mlg = build_multi_level(net);
    Rng rng(2);
    int live = 0;
    const int draws = 100'000;
    for (int i = 0; i < draws; ++i) live += sample_realization(mlg, rng).live(0);
    CHECK(double(live) / draws == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(double(live) / draws - 0.5) <= 0.01);
  }

  TEST_CASE("product formula for two independent edges") {
    auto net = test::two_feature();
    auto mlg = build_multi_level(net);
    FullRealization phi(mlg.edge_count());
    phi.set(mlg.edge_id(0, 0), false);
    phi.set(mlg.edge_id(1, 0), true);
    CHECK(realization_probability(mlg, phi) == doctest::Approx(0.5));
    phi.set(mlg.edge_id(1, 0), false);
    CHECK(realization_probability(mlg, phi) == doctest::Approx(0.0));
  }

  TEST_CASE("hashed outcomes follow the edge probability") {
    int live = 0;
    const int draws = 100'000;
    for (int i = 0; i < draws; ++i) {
      HashedOutcomes world(derive_seed(77, {std::uint64_t(i)}));
      live += world.live(3, 0.3);
    }
    CHECK(std::abs(double(live) / draws - 0.3) <= 0.01);
  }

  TEST_CASE("diffuse from nothing reaches nothing") {
    auto net = test::path3(1.0);
    auto mlg = build_multi_level(net);
    FullRealization phi(mlg.edge_count(), true);
    CHECK(diffuse(mlg, phi, {}).empty());
  }

  TEST_CASE("all seeds with blocked edges accept only themselves") {
    auto net = test::two_feature();
    auto mlg = build_multi_level(net);
    FullRealization phi(mlg.edge_count(), false);
    std::vector<NodeId> seeds{0, 1};
    auto acc = diffuse(mlg, phi, seeds);
    CHECK(acc.size() == 4);
    CHECK(profit(net, acc) == doctest::Approx(2.0));
  }

  TEST_CASE("live edge carries the cascade") {
    auto net = test::one_edge(0.5);
    auto mlg = build_multi_level(net);
    FullRealization phi(mlg.edge_count(), true);
    std::vector<NodeId> seeds{0};
    auto acc = diffuse(mlg, phi, seeds);
    CHECK(acc.layer(0) == std::vector<NodeId>{0, 1});
  }

  TEST_CASE("profit evaluation") {
    auto net = test::two_feature();
    auto mlg = build_multi_level(net);
    FeatureSet none(2, 2);
    CHECK(profit(net, none) == 0.0);

    FeatureSet acc(2, 2);
    acc.insert(mlg.index({0, 0}));
    acc.insert(mlg.index({0, 1}));
    acc.insert(mlg.index({1, 1}));
    CHECK(profit(net, acc) == doctest::Approx(1.7));
  }

  TEST_CASE("a seed contributes exactly its profit") {
    Rng rng(5);
    auto net = test::random_instance(rng, 4, 3, 0);
    auto mlg = build_multi_level(net);
    FullRealization phi(mlg.edge_count());
    std::vector<NodeId> seeds{2};
    CHECK(profit(net, diffuse(mlg, phi, seeds)) == doctest::Approx(net.profit(2)).epsilon(1e-12));
  }

  TEST_CASE("profit stays within [0, sum b]") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
      auto net = test::random_instance(rng, 5, 2, 12);
      auto mlg = build_multi_level(net);
      auto phi = sample_realization(mlg, rng);
      std::vector<NodeId> seeds;
      for (NodeId u = 0; u < net.node_count(); ++u) {
        if (bernoulli(rng, 0.5)) seeds.push_back(u);
      }
      double p = profit(net, diffuse(mlg, phi, seeds));
      CHECK(p >= 0);
      CHECK(p <= net.total_profit() + 1e-12);
    }
  }

  TEST_CASE("observe on a deterministic path") {
    auto net = test::path3(1.0);
    auto mlg = build_multi_level(net);
    PartialRealization partial(net, mlg);
    Rng rng(1);
    SampledOutcomes world(rng);
    auto obs = observe(partial, mlg, net, 0, world);
    CHECK(obs.infected == std::vector<FeatureIndex>{1, 2});
    CHECK(obs.gained_profit == doctest::Approx(3.0));
    CHECK(partial.state(0) == EdgeState::live);
    CHECK(partial.state(1) == EdgeState::live);
    ResidualGraph residual(net, mlg, partial);
    CHECK(residual.empty());
    CHECK(residual.weight() == 0.0);
    CHECK(partial.dom() == std::vector<NodeId>{0});

    SUBCASE("a fully accepted seed infects nobody") {
      auto before = partial.states();
      std::vector<EdgeState> snapshot(before.begin(), before.end());
      auto again = observe(partial, mlg, net, 2, world);
      CHECK(again.infected.empty());
      CHECK(again.gained_profit == 0.0);
      CHECK(std::equal(snapshot.begin(), snapshot.end(), partial.states().begin()));
      CHECK(partial.dom() == std::vector<NodeId>{0, 2});
    }
  }

  TEST_CASE("seeding twice is an error") {
    auto net = test::one_edge(0.5);
    auto mlg = build_multi_level(net);
    PartialRealization partial(net, mlg);
    HashedOutcomes world(3);
    observe(partial, mlg, net, 0, world);
    CHECK_THROWS_AS(observe(partial, mlg, net, 0, world), DuplicateSeedError);
  }

  TEST_CASE("observed edges are exactly the out-edges of accepted nodes") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
      auto net = test::random_instance(rng, 6, 2, 16);
      auto mlg = build_multi_level(net);
      PartialRealization partial(net, mlg);
      HashedOutcomes world(rng());
      for (NodeId u = 0; u < net.node_count(); ++u) {
        if (!bernoulli(rng, 0.4)) continue;
        observe(partial, mlg, net, u, world);
        for (LayerEdgeId id = 0; id < mlg.edge_count(); ++id) {
          auto le = mlg.edge(id);
          CHECK((partial.state(id) != EdgeState::unknown) == partial.accepted().contains(le.src));
        }
        ResidualGraph residual(net, mlg, partial);
        CHECK(residual.weight() == doctest::Approx(residual.recompute_weight()).epsilon(1e-9));
        CHECK(residual.min_value() <= residual.weight() + 1e-12);
      }
    }
  }

  TEST_CASE("feedback is consistent with every completion") {
    Rng rng(10);
    for (int trial = 0; trial < 40; ++trial) {
      auto net = test::random_instance(rng, 6, 2, 16);
      auto mlg = build_multi_level(net);
      auto phi = sample_realization(mlg, rng);
      FixedOutcomes world(phi);
      PartialRealization partial(net, mlg);
      for (NodeId u = 0; u < net.node_count(); ++u) {
        if (bernoulli(rng, 0.5)) observe(partial, mlg, net, u, world);
      }
      for (int k = 0; k < 5; ++k) {
        FullRealization completion = sample_realization(mlg, rng);
        for (LayerEdgeId id = 0; id < mlg.edge_count(); ++id) {
          if (partial.state(id) != EdgeState::unknown) completion.set(id, partial.state(id) == EdgeState::live);
        }
        CHECK(diffuse(mlg, completion, partial.dom()) == partial.accepted());
      }
    }
  }

  TEST_CASE("residual weight never grows") {
    Rng rng(11);
    auto net = test::random_instance(rng, 8, 3, 30);
    auto mlg = build_multi_level(net);
    PartialRealization partial(net, mlg);
    HashedOutcomes world(4);
    double last = partial.residual_weight();
    CHECK(last == doctest::Approx(net.total_profit()));
    for (NodeId u = 0; u < net.node_count(); ++u) {
      observe(partial, mlg, net, u, world);
      CHECK(partial.residual_weight() <= last + 1e-12);
      last = partial.residual_weight();
    }
    CHECK(last == 0.0);
  }

  TEST_CASE("Monte-Carlo profit estimates") {
    auto net = test::one_edge(0.5);
    auto mlg = build_multi_level(net);
    Rng rng(12);
    CHECK_THROWS(estimate_profit(net, mlg, std::vector<NodeId>{0}, 0, rng));
    CHECK(estimate_profit(net, mlg, {}, 100, rng).mean == 0.0);

    auto est = estimate_profit(net, mlg, std::vector<NodeId>{0}, 100'000, rng);
    CHECK(std::abs(est.mean - 1.5) <= 0.01);

    auto all = estimate_profit(net, mlg, std::vector<NodeId>{0, 1}, 1000, rng);
    CHECK(all.mean == doctest::Approx(net.total_profit()));
    CHECK(all.std_error == 0.0);
  }
}
