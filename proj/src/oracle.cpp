#include "mfpm/oracle.hpp"

#include <string>

namespace mfpm {

namespace {

constexpr int kHardEdgeLimit = 25;
constexpr std::uint32_t kMaxOptimumNodes = 12;

void check_enumerable(std::size_t edges, EnumerationBudget budget) {
  if (budget.max_edges < 0 || budget.max_edges > kHardEdgeLimit) {
    throw EnumerationError("enumeration budget must lie in [0, 25] edges");
  }
  if (edges > static_cast<std::size_t>(budget.max_edges)) {
    throw EnumerationError("cannot enumerate " + std::to_string(edges) + " edges; budget is " +
                           std::to_string(budget.max_edges));
  }
}

}  // namespace

double exact_P(const SocialNetwork& net, const MultiLevelGraph& mlg, std::span<const NodeId> seeds,
               EnumerationBudget budget) {
  const std::uint32_t edges = mlg.edge_count();
  check_enumerable(edges, budget);
  double total = 0;
  FullRealization phi(edges);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges); ++mask) {
    for (LayerEdgeId id = 0; id < edges; ++id) phi.set(id, (mask >> id) & 1);
    total += realization_probability(mlg, phi) * profit(net, diffuse(mlg, phi, seeds));
  }
  return total;
}

double exact_delta(const SocialNetwork& net, const MultiLevelGraph& mlg, const PartialRealization& partial, NodeId u,
                   EnumerationBudget budget) {
  if (partial.selected(u)) throw std::invalid_argument("exact_delta: node is already in dom");
  std::vector<LayerEdgeId> unknown;
  FullRealization phi(mlg.edge_count());
  for (LayerEdgeId id = 0; id < mlg.edge_count(); ++id) {
    switch (partial.state(id)) {
      case EdgeState::unknown: unknown.push_back(id); break;
      case EdgeState::live: phi.set(id, true); break;
      case EdgeState::blocked: phi.set(id, false); break;
    }
  }
  check_enumerable(unknown.size(), budget);

  std::vector<NodeId> with_u = partial.dom();
  with_u.push_back(u);
  double total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << unknown.size()); ++mask) {
    double pr = 1;
    for (std::size_t k = 0; k < unknown.size(); ++k) {
      bool live = (mask >> k) & 1;
      phi.set(unknown[k], live);
      pr *= live ? mlg.prob(unknown[k]) : 1 - mlg.prob(unknown[k]);
    }
    total += pr * (profit(net, diffuse(mlg, phi, with_u)) - profit(net, diffuse(mlg, phi, partial.dom())));
  }
  return total;
}

Optimum exact_optimum(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget,
                      EnumerationBudget enumeration) {
  const std::uint32_t n = net.node_count();
  if (n > kMaxOptimumNodes) throw EnumerationError("exact_optimum supports at most 12 nodes");
  check_enumerable(mlg.edge_count(), enumeration);
  Optimum best;
  std::vector<NodeId> seeds;
  for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
    seeds.clear();
    double cost = 0;
    for (NodeId u = 0; u < n; ++u) {
      if ((subset >> u) & 1) {
        seeds.push_back(u);
        cost += net.cost(u);
      }
    }
    if (cost > budget) continue;
    double value = exact_P(net, mlg, seeds, enumeration);
    if (value > best.value) {
      best.value = value;
      best.seeds = seeds;
    }
  }
  return best;
}

}  // namespace mfpm
