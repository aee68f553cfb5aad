#include "mfpm/generators.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "mfpm/random.hpp"

namespace mfpm {

namespace {

EdgeList with_labels(std::uint32_t nodes) {
  EdgeList list;
  list.labels.reserve(nodes);
  for (std::uint32_t u = 0; u < nodes; ++u) list.labels.push_back(std::to_string(u));
  return list;
}

}  // namespace

EdgeList barabasi_albert(std::uint32_t nodes, std::uint32_t links, std::uint64_t seed) {
  if (links == 0 || nodes <= links) throw std::invalid_argument("barabasi_albert: need nodes > links > 0");
  Rng rng(seed);
  EdgeList list = with_labels(nodes);
  std::vector<NodeId> endpoints;  // each node repeated once per incident edge
  // Seed clique on links + 1 nodes.
  for (NodeId u = 0; u <= links; ++u) {
    for (NodeId v = u + 1; v <= links; ++v) {
      list.edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  for (NodeId u = links + 1; u < nodes; ++u) {
    std::set<NodeId> targets;
    while (targets.size() < links) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      targets.insert(endpoints[pick(rng)]);
    }
    for (NodeId v : targets) {
      list.edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return list;
}

EdgeList erdos_renyi(std::uint32_t nodes, std::uint64_t edges, std::uint64_t seed) {
  if (nodes < 2) throw std::invalid_argument("erdos_renyi: need at least two nodes");
  if (edges > std::uint64_t(nodes) * (nodes - 1)) throw std::invalid_argument("erdos_renyi: too many edges");
  Rng rng(seed);
  EdgeList list = with_labels(nodes);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::uniform_int_distribution<NodeId> pick(0, nodes - 1);
  while (list.edges.size() < edges) {
    NodeId s = pick(rng), d = pick(rng);
    if (s == d || !seen.emplace(s, d).second) continue;
    list.edges.emplace_back(s, d);
  }
  return list;
}

void write_edge_list(std::ostream& out, const EdgeList& list) {
  for (auto [s, d] : list.edges) out << list.labels[s] << ' ' << list.labels[d] << '\n';
}

}  // namespace mfpm
