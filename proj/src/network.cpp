#include "mfpm/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mfpm/random.hpp"

namespace mfpm {

namespace {

constexpr double kWeightTolerance = 1e-9;
constexpr double kMinDraw = 1e-12;

// CSR over edge ids, grouped by `key` and sorted by `other` inside a group.
void build_csr(std::uint32_t n, const std::vector<NodeId>& key, const std::vector<NodeId>& other,
               std::vector<std::uint32_t>& offset, std::vector<EdgeId>& ids) {
  offset.assign(n + 1, 0);
  for (auto k : key) ++offset[k + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  ids.resize(key.size());
  auto cursor = offset;
  for (EdgeId e = 0; e < key.size(); ++e) ids[cursor[key[e]]++] = e;
  for (std::uint32_t u = 0; u < n; ++u) {
    std::sort(ids.begin() + offset[u], ids.begin() + offset[u + 1],
              [&](EdgeId a, EdgeId b) { return other[a] < other[b]; });
  }
}

}  // namespace

ParamConfig ParamConfig::from(const KeyValueConfig& kv) {
  ParamConfig c;
  auto q = kv.get_int("q", 1);
  if (q < 1) throw ConfigError("key 'q': must be a positive integer");
  c.q = static_cast<std::uint32_t>(q);
  c.directed = kv.get_bool("directed", true);
  c.rng_seed = kv.get_uint("rng_seed", 0);
  c.cost_range = kv.get_range("cost_range", c.cost_range);
  c.profit_range = kv.get_range("profit_range", c.profit_range);
  if (c.cost_range.first < 0 || c.profit_range.first < 0) {
    throw ConfigError("cost_range / profit_range must be nonnegative");
  }
  return c;
}

SocialNetwork SocialNetwork::build(NetworkParts parts) {
  const auto q = parts.q;
  const auto n = static_cast<std::uint32_t>(parts.cost.size());
  const auto m = static_cast<std::uint32_t>(parts.edges.size());
  if (q == 0) throw NetworkError("feature count q must be positive");
  if (n == 0) throw NetworkError("network has no nodes");
  if (parts.profit.size() != n) throw NetworkError("profit vector size does not match node count");
  if (parts.weights.size() != std::size_t(n) * q) throw NetworkError("weight table must have n*q entries");
  if (parts.probs.size() != std::size_t(m) * q) throw NetworkError("probability table must have m*q entries");
  if (parts.labels.empty()) {
    parts.labels.resize(n);
    for (NodeId u = 0; u < n; ++u) parts.labels[u] = std::to_string(u);
  }
  if (parts.labels.size() != n) throw NetworkError("label count does not match node count");

  for (NodeId u = 0; u < n; ++u) {
    if (!(parts.cost[u] > 0) || !std::isfinite(parts.cost[u])) {
      throw NetworkError("node " + parts.labels[u] + ": cost must be strictly positive");
    }
    if (!(parts.profit[u] >= 0) || !std::isfinite(parts.profit[u])) {
      throw NetworkError("node " + parts.labels[u] + ": profit must be nonnegative");
    }
    double sum = 0;
    for (std::uint32_t i = 0; i < q; ++i) {
      double w = parts.weights[std::size_t(u) * q + i];
      if (!(w > 0 && w <= 1)) throw NetworkError("node " + parts.labels[u] + ": weights must lie in (0,1]");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTolerance) {
      throw NetworkError("node " + parts.labels[u] + ": weights must sum to 1");
    }
  }

  std::vector<std::pair<NodeId, NodeId>> sorted = parts.edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw NetworkError("duplicate directed edge");
  }
  for (std::size_t e = 0; e < m; ++e) {
    auto [s, d] = parts.edges[e];
    if (s >= n || d >= n) throw NetworkError("edge endpoint out of range");
    if (s == d) throw NetworkError("self-loop on node " + parts.labels[s]);
    for (std::uint32_t i = 0; i < q; ++i) {
      double p = parts.probs[e * q + i];
      if (!(p > 0 && p <= 1)) throw NetworkError("edge probabilities must lie in (0,1]");
    }
  }

  SocialNetwork net;
  net.q_ = q;
  net.labels_ = std::move(parts.labels);
  net.src_.reserve(m);
  net.dst_.reserve(m);
  for (auto [s, d] : parts.edges) {
    net.src_.push_back(s);
    net.dst_.push_back(d);
  }
  net.probs_ = std::move(parts.probs);
  net.cost_ = std::move(parts.cost);
  net.profit_ = std::move(parts.profit);
  net.weights_ = std::move(parts.weights);
  build_csr(n, net.src_, net.dst_, net.out_offset_, net.out_edge_);
  build_csr(n, net.dst_, net.src_, net.in_offset_, net.in_edge_);
  return net;
}

double SocialNetwork::total_profit() const { return std::accumulate(profit_.begin(), profit_.end(), 0.0); }
double SocialNetwork::total_cost() const { return std::accumulate(cost_.begin(), cost_.end(), 0.0); }
double SocialNetwork::max_cost() const { return *std::max_element(cost_.begin(), cost_.end()); }

EdgeList parse_edge_list(std::istream& in, bool directed) {
  EdgeList out;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(out.labels.size()));
    if (inserted) out.labels.push_back(label);
    return it->second;
  };

  std::vector<std::pair<NodeId, NodeId>> raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '%') continue;
    std::istringstream fields(t);
    std::string a, b, extra;
    if (!(fields >> a >> b)) throw ParseError(line_no, "expected 'src dst', got '" + t + "'");
    if (fields >> extra) throw ParseError(line_no, "unexpected trailing field '" + extra + "'");
    NodeId s = intern(a);
    NodeId d = intern(b);
    if (s == d) {
      ++out.self_loops_removed;
      continue;
    }
    raw.emplace_back(s, d);
    if (!directed) raw.emplace_back(d, s);
  }
  if (raw.empty()) throw NetworkError("edge list contains no edges");

  // Deduplicate while keeping first-appearance order.
  std::vector<std::pair<NodeId, NodeId>> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<bool> seen(sorted.size(), false);
  out.edges.reserve(sorted.size());
  for (const auto& e : raw) {
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin();
    if (seen[pos]) {
      ++out.duplicates_removed;
      continue;
    }
    seen[pos] = true;
    out.edges.push_back(e);
  }
  // An undirected pair listed in both directions is a duplicate of one input
  // edge, not of two.
  if (!directed) out.duplicates_removed /= 2;
  return out;
}

SocialNetwork synthesize_parameters(const EdgeList& list, const ParamConfig& config) {
  const auto n = static_cast<std::uint32_t>(list.labels.size());
  const auto q = config.q;
  if (n == 0 || list.edges.empty()) throw NetworkError("empty graph");

  std::vector<std::uint32_t> indeg(n, 0);
  for (auto [s, d] : list.edges) ++indeg[d];

  NetworkParts parts;
  parts.q = q;
  parts.labels = list.labels;
  parts.edges = list.edges;
  parts.probs.reserve(list.edges.size() * q);
  for (auto [s, d] : list.edges) {
    parts.probs.insert(parts.probs.end(), q, 1.0 / indeg[d]);
  }

  Rng rng(config.rng_seed);
  auto draw = [&](std::pair<double, double> range) {
    double v = range.first + (range.second - range.first) * uniform_left_open(rng);
    return std::max(v, kMinDraw);
  };
  parts.cost.resize(n);
  parts.profit.resize(n);
  parts.weights.resize(std::size_t(n) * q);
  for (NodeId u = 0; u < n; ++u) {
    parts.cost[u] = draw(config.cost_range);
    parts.profit[u] = draw(config.profit_range);
    // Normalized exponentials are uniform on the simplex.
    double sum = 0;
    auto w = parts.weights.begin() + std::size_t(u) * q;
    for (std::uint32_t i = 0; i < q; ++i) sum += (w[i] = -std::log(uniform_open(rng)));
    for (std::uint32_t i = 0; i < q; ++i) w[i] /= sum;
  }
  return SocialNetwork::build(std::move(parts));
}

SocialNetwork load_network(const std::filesystem::path& path, const ParamConfig& config) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open edge list " + path.string());
  EdgeList list;
  try {
    list = parse_edge_list(in, config.directed);
  } catch (const NetworkError& e) {
    throw NetworkError(path.string() + ": " + e.what());
  }
  if (list.duplicates_removed > 0) {
    std::clog << "warning: " << path.string() << ": removed " << list.duplicates_removed << " duplicate edges\n";
  }
  if (list.self_loops_removed > 0) {
    std::clog << "warning: " << path.string() << ": removed " << list.self_loops_removed << " self-loops\n";
  }
  return synthesize_parameters(list, config);
}

MultiLevelGraph::LayerEdge MultiLevelGraph::edge(LayerEdgeId id) const {
  const std::uint32_t layer = id / m_;
  const EdgeId e = id % m_;
  return {layer * n_ + src_[e], layer * n_ + dst_[e], prob_[id]};
}

std::vector<MultiLevelGraph::LayerEdge> MultiLevelGraph::layer_edges(std::uint32_t layer) const {
  std::vector<LayerEdge> out;
  out.reserve(m_);
  for (EdgeId e = 0; e < m_; ++e) out.push_back(edge(edge_id(layer, e)));
  return out;
}

MultiLevelGraph build_multi_level(const SocialNetwork& net) {
  MultiLevelGraph g;
  g.n_ = net.node_count();
  g.m_ = net.edge_count();
  g.q_ = net.feature_count();
  g.src_.resize(g.m_);
  g.dst_.resize(g.m_);
  g.prob_.resize(std::size_t(g.m_) * g.q_);
  for (EdgeId e = 0; e < g.m_; ++e) {
    g.src_[e] = net.edge_src(e);
    g.dst_[e] = net.edge_dst(e);
    for (std::uint32_t i = 0; i < g.q_; ++i) g.prob_[std::size_t(i) * g.m_ + e] = net.edge_prob(e, i);
  }
  build_csr(g.n_, g.src_, g.dst_, g.out_offset_, g.out_edge_);
  build_csr(g.n_, g.dst_, g.src_, g.in_offset_, g.in_edge_);
  return g;
}

}  // namespace mfpm
