#pragma once

// Small hand-built instances and random generators shared by the test suites.

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "mfpm/diffusion.hpp"
#include "mfpm/network.hpp"
#include "mfpm/random.hpp"

namespace mfpm::test {

struct EdgeSpec {
  NodeId src;
  NodeId dst;
  std::vector<double> probs;
};

struct NetSpec {
  std::uint32_t q = 1;
  std::vector<EdgeSpec> edges;
  std::vector<double> cost;
  std::vector<double> profit;
  std::vector<std::vector<double>> weights;  // empty: uniform 1/q
};

inline SocialNetwork make_net(const NetSpec& spec) {
  NetworkParts parts;
  parts.q = spec.q;
  const auto n = spec.cost.size();
  parts.cost = spec.cost;
  parts.profit = spec.profit;
  for (const auto& e : spec.edges) {
    parts.edges.emplace_back(e.src, e.dst);
    parts.probs.insert(parts.probs.end(), e.probs.begin(), e.probs.end());
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (spec.weights.empty()) {
      parts.weights.insert(parts.weights.end(), spec.q, 1.0 / spec.q);
    } else {
      parts.weights.insert(parts.weights.end(), spec.weights[u].begin(), spec.weights[u].end());
    }
  }
  return SocialNetwork::build(std::move(parts));
}

/// a -> b, q = 1, p = 0.5, b = c = 1.
inline SocialNetwork one_edge(double p = 0.5) {
  return make_net({1, {{0, 1, {p}}}, {1, 1}, {1, 1}, {}});
}

/// a -> b, q = 2, p = (0.5, 1.0), w_a = (0.5, 0.5), w_b = (0.3, 0.7), b = c = 1.
inline SocialNetwork two_feature() {
  return make_net({2, {{0, 1, {0.5, 1.0}}}, {1, 1}, {1, 1}, {{0.5, 0.5}, {0.3, 0.7}}});
}

/// a -> b -> c, q = 1, uniform p, b = c = 1.
inline SocialNetwork path3(double p) {
  return make_net({1, {{0, 1, {p}}, {1, 2, {p}}}, {1, 1, 1}, {1, 1, 1}, {}});
}

/// Random instance with n nodes, q features and at most `max_layer_edges`
/// multi-level edges. Probabilities in [0.1, 1], costs in (0.2, 1.2], profits
/// in (0.1, 1.1], simplex weights.
inline SocialNetwork random_instance(Rng& rng, std::uint32_t n, std::uint32_t q, std::uint32_t max_layer_edges) {
  std::vector<std::pair<NodeId, NodeId>> all;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId d = 0; d < n; ++d) {
      if (s != d) all.emplace_back(s, d);
    }
  }
  std::shuffle(all.begin(), all.end(), rng);
  std::uint32_t m = std::min<std::uint32_t>(static_cast<std::uint32_t>(all.size()), max_layer_edges / q);
  m = std::uniform_int_distribution<std::uint32_t>(std::min(m, 1u), m)(rng);
  NetSpec spec;
  spec.q = q;
  for (std::uint32_t e = 0; e < m; ++e) {
    EdgeSpec es{all[e].first, all[e].second, {}};
    for (std::uint32_t i = 0; i < q; ++i) es.probs.push_back(0.1 + 0.9 * uniform_left_open(rng));
    spec.edges.push_back(std::move(es));
  }
  for (NodeId u = 0; u < n; ++u) {
    spec.cost.push_back(0.2 + uniform_left_open(rng));
    spec.profit.push_back(0.1 + uniform_left_open(rng));
    std::vector<double> w(q);
    double sum = 0;
    for (auto& x : w) sum += (x = -std::log(uniform_open(rng)));
    for (auto& x : w) x /= sum;
    spec.weights.push_back(std::move(w));
  }
  return make_net(spec);
}

struct MeanSe {
  double mean = 0;
  double se = 0;
};

template <typename Range>
MeanSe mean_se(const Range& xs) {
  double n = static_cast<double>(std::size(xs));
  double sum = 0, sq = 0;
  for (double x : xs) {
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  double var = n > 1 ? std::max(0.0, (sq - sum * sum / n) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace mfpm::test
