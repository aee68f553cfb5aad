#include <doctest.h>

#include <sstream>

#include "mfpm/config.hpp"
#include "mfpm/network.hpp"
#include "support.hpp"

using namespace mfpm;

namespace {

SocialNetwork load_string(const std::string& text, ParamConfig config) {
  std::istringstream in(text);
  return synthesize_parameters(parse_edge_list(in, config.directed), config);
}

ParamConfig params(std::uint32_t q, bool directed, std::uint64_t seed = 1) {
  ParamConfig c;
  c.q = q;
  c.directed = directed;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("network") {
  TEST_CASE("directed path gets 1/indeg probabilities") {
    auto net = load_string("0 1\n1 2", params(1, true, 99));
    CHECK(net.node_count() == 3);
    CHECK(net.edge_count() == 2);
    CHECK(net.edge_prob(0, 0) == 1.0);
    CHECK(net.edge_prob(1, 0) == 1.0);
    CHECK(net.label(0) == "0");
    CHECK(net.label(2) == "2");
  }

  TEST_CASE("undirected edge expands into two reversed edges") {
    auto net = load_string("0 1", params(2, false));
    REQUIRE(net.node_count() == 2);
    REQUIRE(net.edge_count() == 2);
    for (EdgeId e = 0; e < 2; ++e) {
      CHECK(net.edge_prob(e, 0) == 1.0);
      CHECK(net.edge_prob(e, 1) == 1.0);
    }
    CHECK(net.edge_src(0) == net.edge_dst(1));
    CHECK(net.edge_dst(0) == net.edge_src(1));
  }

  TEST_CASE("weights lie on the simplex, costs and profits in (0,1]") {
    Rng rng(3);
    std::string text;
    for (int i = 0; i < 40; ++i) text += std::to_string(i) + " " + std::to_string((i * 7 + 3) % 40) + "\n";
    auto net = load_string(text, params(3, true, 17));
    for (NodeId u = 0; u < net.node_count(); ++u) {
      double sum = 0;
      for (double w : net.weights(u)) {
        CHECK(w > 0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(net.cost(u) > 0);
      CHECK(net.cost(u) <= 1);
      CHECK(net.profit(u) > 0);
      CHECK(net.profit(u) <= 1);
    }
  }

  TEST_CASE("ids are re-indexed in first-appearance order") {
    auto net = load_string("# comment\n% other comment\n\n17 4\n4 99\n", params(1, true));
    REQUIRE(net.node_count() == 3);
    CHECK(net.label(0) == "17");
    CHECK(net.label(1) == "4");
    CHECK(net.label(2) == "99");
  }

  TEST_CASE("duplicates and self-loops are dropped and counted") {
    std::istringstream in("0 1\n0 1\n1 1\n1 0\n");
    auto list = parse_edge_list(in, true);
    CHECK(list.edges.size() == 2);
    CHECK(list.duplicates_removed == 1);
    CHECK(list.self_loops_removed == 1);

    std::istringstream und("0 1\n1 0\n");
    auto ulist = parse_edge_list(und, false);
    CHECK(ulist.edges.size() == 2);
    CHECK(ulist.duplicates_removed == 1);
  }

  TEST_CASE("malformed lines report their line number") {
    std::istringstream bad("0 1\n# fine\n2\n");
    try {
      parse_edge_list(bad, true);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    std::istringstream trailing("0 1 junk\n");
    CHECK_THROWS_AS(parse_edge_list(trailing, true), ParseError);
  }

  TEST_CASE("empty graph is rejected") {
    std::istringstream empty("# nothing\n\n");
    CHECK_THROWS_AS(parse_edge_list(empty, true), NetworkError);
  }

  TEST_CASE("same seed gives identical parameters") {
    std::string text = "a b\nb c\nc a\na d\n";
    CHECK(load_string(text, params(3, false, 5)) == load_string(text, params(3, false, 5)));
    CHECK_FALSE(load_string(text, params(3, false, 5)) == load_string(text, params(3, false, 6)));
  }

  TEST_CASE("probability mass into each node is q/indeg") {
    std::string text = "0 1\n2 1\n3 1\n1 2\n0 2\n";
    const std::uint32_t q = 3;
    auto net = load_string(text, params(q, true));
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (net.in_degree(v) == 0) continue;
      for (EdgeId e : net.in_edges(v)) {
        double sum = 0;
        for (double p : net.edge_probs(e)) sum += p;
        CHECK(sum == doctest::Approx(double(q) / net.in_degree(v)));
      }
    }
  }

  TEST_CASE("invalid parts are rejected") {
    NetworkParts parts;
    parts.q = 1;
    parts.edges = {{0, 1}};
    parts.probs = {0.5};
    parts.cost = {1, 1};
    parts.profit = {1, 1};
    parts.weights = {1, 1};
    CHECK_NOTHROW(SocialNetwork::build(parts));

    auto bad = parts;
    bad.probs = {1.5};
    CHECK_THROWS_AS(SocialNetwork::build(bad), NetworkError);
    bad = parts;
    bad.cost = {0, 1};
    CHECK_THROWS_AS(SocialNetwork::build(bad), NetworkError);
    bad = parts;
    bad.weights = {0.5, 1};
    CHECK_THROWS_AS(SocialNetwork::build(bad), NetworkError);
    bad = parts;
    bad.edges = {{1, 1}};
    CHECK_THROWS_AS(SocialNetwork::build(bad), NetworkError);
  }

  TEST_CASE("param config parsing") {
    std::istringstream text("q = 5\ndirected = false\nrng_seed = 42\ncost_range = 0.5,2\n");
    auto kv = KeyValueConfig::parse(text);
    auto c = ParamConfig::from(kv);
    CHECK(c.q == 5);
    CHECK_FALSE(c.directed);
    CHECK(c.rng_seed == 42);
    CHECK(c.cost_range.first == 0.5);
    CHECK(c.cost_range.second == 2.0);
    CHECK(c.profit_range.second == 1.0);
  }
}

TEST_SUITE("network") {
  TEST_CASE("multi-level graph of a 4-node, 3-edge network with q=3") {
    test::NetSpec spec{3, {{0, 1, {0.1, 0.2, 0.3}}, {1, 2, {0.4, 0.5, 0.6}}, {2, 3, {0.7, 0.8, 0.9}}},
                       {1, 1, 1, 1}, {1, 1, 1, 1}, {}};
    auto net = test::make_net(spec);
    auto mlg = build_multi_level(net);
    CHECK(mlg.node_count() == 12);
    CHECK(mlg.edge_count() == 9);
    for (std::uint32_t layer = 0; layer < 3; ++layer) {
      auto edges = mlg.layer_edges(layer);
      CHECK(edges.size() == 3);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        CHECK(mlg.layer_of(edges[e].src) == layer);
        CHECK(mlg.layer_of(edges[e].dst) == layer);
        CHECK(edges[e].prob == net.edge_prob(EdgeId(e), layer));
      }
    }
  }

  TEST_CASE("single layer mirrors the base graph") {
    auto net = test::path3(0.4);
    auto mlg = build_multi_level(net);
    CHECK(mlg.node_count() == net.node_count());
    CHECK(mlg.edge_count() == net.edge_count());
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
      auto le = mlg.edge(mlg.edge_id(0, e));
      CHECK(le.src == net.edge_src(e));
      CHECK(le.dst == net.edge_dst(e));
      CHECK(le.prob == net.edge_prob(e, 0));
    }
  }

  TEST_CASE("two-feature edge splits across layers") {
    auto net = test::two_feature();
    auto mlg = build_multi_level(net);
    auto l1 = mlg.edge(mlg.edge_id(0, 0));
    auto l2 = mlg.edge(mlg.edge_id(1, 0));
    CHECK(l1.src == mlg.index({0, 0}));
    CHECK(l1.dst == mlg.index({1, 0}));
    CHECK(l1.prob == 0.5);
    CHECK(l2.src == mlg.index({0, 1}));
    CHECK(l2.dst == mlg.index({1, 1}));
    CHECK(l2.prob == 1.0);
  }

  TEST_CASE("build_multi_level is pure") {
    Rng rng(8);
    auto net = test::random_instance(rng, 5, 2, 12);
    CHECK(build_multi_level(net) == build_multi_level(net));
  }
}
