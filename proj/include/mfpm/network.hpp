#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfpm/config.hpp"

namespace mfpm {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Flat index of a feature node in the multi-level graph: feature * n + user.
using FeatureIndex = std::uint32_t;

/// Multi-level edge id: feature * m + base edge id.
using LayerEdgeId = std::uint32_t;

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public NetworkError {
 public:
  ParseError(int line, const std::string& what)
      : NetworkError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A user node together with one of its features. `feature` is 0-based.
struct FeatureNodeId {
  NodeId user = 0;
  std::uint32_t feature = 0;

  friend bool operator==(const FeatureNodeId&, const FeatureNodeId&) = default;
};

/// Parameter-synthesis settings for an edge-list dataset.
struct ParamConfig {
  std::uint32_t q = 1;
  bool directed = true;
  std::uint64_t rng_seed = 0;
  std::pair<double, double> cost_range{0.0, 1.0};
  std::pair<double, double> profit_range{0.0, 1.0};

  static ParamConfig from(const KeyValueConfig& kv);
};

/// Everything needed to build a SocialNetwork. Probabilities and weights are
/// stored row-major: probs[e * q + i], weights[u * q + i].
struct NetworkParts {
  std::uint32_t q = 1;
  std::vector<std::string> labels;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<double> probs;
  std::vector<double> cost;
  std::vector<double> profit;
  std::vector<double> weights;
};

/// Directed graph with per-node cost/profit/feature weights and per-edge
/// q-dimensional propagation probabilities. Immutable once built.
class SocialNetwork {
 public:
  /// Validates every invariant and throws NetworkError on violation.
  static SocialNetwork build(NetworkParts parts);

  std::uint32_t node_count() const { return static_cast<std::uint32_t>(cost_.size()); }
  std::uint32_t edge_count() const { return static_cast<std::uint32_t>(src_.size()); }
  std::uint32_t feature_count() const { return q_; }

  NodeId edge_src(EdgeId e) const { return src_[e]; }
  NodeId edge_dst(EdgeId e) const { return dst_[e]; }
  double edge_prob(EdgeId e, std::uint32_t feature) const { return probs_[std::size_t(e) * q_ + feature]; }
  std::span<const double> edge_probs(EdgeId e) const { return {probs_.data() + std::size_t(e) * q_, q_}; }

  double cost(NodeId u) const { return cost_[u]; }
  double profit(NodeId u) const { return profit_[u]; }
  double weight(NodeId u, std::uint32_t feature) const { return weights_[std::size_t(u) * q_ + feature]; }
  std::span<const double> weights(NodeId u) const { return {weights_.data() + std::size_t(u) * q_, q_}; }

  /// b(u) * w_u^i, the profit mass carried by a single feature node.
  double feature_value(NodeId u, std::uint32_t feature) const { return profit_[u] * weight(u, feature); }

  /// Edge ids leaving / entering u, sorted by the opposite endpoint.
  std::span<const EdgeId> out_edges(NodeId u) const {
    return {out_edge_.data() + out_offset_[u], out_offset_[u + 1] - out_offset_[u]};
  }
  std::span<const EdgeId> in_edges(NodeId u) const {
    return {in_edge_.data() + in_offset_[u], in_offset_[u + 1] - in_offset_[u]};
  }
  std::uint32_t out_degree(NodeId u) const { return out_offset_[u + 1] - out_offset_[u]; }
  std::uint32_t in_degree(NodeId u) const { return in_offset_[u + 1] - in_offset_[u]; }

  const std::string& label(NodeId u) const { return labels_[u]; }
  const std::vector<double>& costs() const { return cost_; }
  const std::vector<double>& profits() const { return profit_; }
  double total_profit() const;
  double total_cost() const;
  double max_cost() const;

  friend bool operator==(const SocialNetwork&, const SocialNetwork&) = default;

 private:
  SocialNetwork() = default;

  std::uint32_t q_ = 1;
  std::vector<std::string> labels_;
  std::vector<NodeId> src_, dst_;
  std::vector<double> probs_;
  std::vector<double> cost_, profit_, weights_;
  std::vector<std::uint32_t> out_offset_, in_offset_;
  std::vector<EdgeId> out_edge_, in_edge_;
};

/// Raw edge list after parsing and re-indexing.
struct EdgeList {
  std::vector<std::string> labels;  // dense id -> original label
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t duplicates_removed = 0;
  std::size_t self_loops_removed = 0;
};

/// Parses a whitespace separated "src dst" list ('#' lines ignored). Node ids
/// are densely re-indexed in first-appearance order. Undirected inputs are
/// expanded into two reversed directed edges.
EdgeList parse_edge_list(std::istream& in, bool directed);

/// Draws weights, costs and profits; sets every probability vector to 1/indeg(dst).
SocialNetwork synthesize_parameters(const EdgeList& list, const ParamConfig& config);

/// parse_edge_list + synthesize_parameters. Duplicate and self-loop counts are
/// reported on std::clog.
SocialNetwork load_network(const std::filesystem::path& path, const ParamConfig& config);

/// q stacked copies of the base network; layer i carries component i of each
/// edge probability vector. Feature nodes and layer edges are addressed by the
/// flat FeatureIndex / LayerEdgeId encodings.
class MultiLevelGraph {
 public:
  struct LayerEdge {
    FeatureIndex src;
    FeatureIndex dst;
    double prob;
  };

  std::uint32_t layer_count() const { return q_; }
  std::uint32_t user_count() const { return n_; }
  std::uint32_t base_edge_count() const { return m_; }
  std::uint32_t node_count() const { return n_ * q_; }
  std::uint32_t edge_count() const { return m_ * q_; }

  FeatureIndex index(FeatureNodeId f) const { return f.feature * n_ + f.user; }
  FeatureNodeId node(FeatureIndex x) const { return {x % n_, x / n_}; }
  NodeId user_of(FeatureIndex x) const { return x % n_; }
  std::uint32_t layer_of(FeatureIndex x) const { return x / n_; }

  LayerEdgeId edge_id(std::uint32_t layer, EdgeId e) const { return layer * m_ + e; }
  LayerEdge edge(LayerEdgeId id) const;
  double prob(LayerEdgeId id) const { return prob_[id]; }

  /// All edges of one layer, in base-edge order.
  std::vector<LayerEdge> layer_edges(std::uint32_t layer) const;

  // Shared topology of every layer.
  NodeId base_src(EdgeId e) const { return src_[e]; }
  NodeId base_dst(EdgeId e) const { return dst_[e]; }
  std::span<const EdgeId> out_edges(NodeId u) const {
    return {out_edge_.data() + out_offset_[u], out_offset_[u + 1] - out_offset_[u]};
  }
  std::span<const EdgeId> in_edges(NodeId u) const {
    return {in_edge_.data() + in_offset_[u], in_offset_[u + 1] - in_offset_[u]};
  }

  friend bool operator==(const MultiLevelGraph&, const MultiLevelGraph&) = default;

 private:
  friend MultiLevelGraph build_multi_level(const SocialNetwork& net);

  std::uint32_t n_ = 0, m_ = 0, q_ = 0;
  std::vector<NodeId> src_, dst_;
  std::vector<double> prob_;  // layer-major, indexed by LayerEdgeId
  std::vector<std::uint32_t> out_offset_, in_offset_;
  std::vector<EdgeId> out_edge_, in_edge_;
};

MultiLevelGraph build_multi_level(const SocialNetwork& net);

}  // namespace mfpm
