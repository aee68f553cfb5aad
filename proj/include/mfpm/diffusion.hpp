#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfpm/network.hpp"
#include "mfpm/random.hpp"

namespace mfpm {

enum class EdgeState : std::uint8_t { unknown = 0, live = 1, blocked = 2 };

/// Live/blocked assignment to every multi-level edge.
class FullRealization {
 public:
  explicit FullRealization(std::size_t edges = 0, bool live = false) : live_(edges, live ? 1 : 0) {}

  std::size_t size() const { return live_.size(); }
  bool live(LayerEdgeId id) const { return live_[id] != 0; }
  void set(LayerEdgeId id, bool live) { live_[id] = live ? 1 : 0; }

  friend bool operator==(const FullRealization&, const FullRealization&) = default;

 private:
  std::vector<std::uint8_t> live_;
};

FullRealization sample_realization(const MultiLevelGraph& mlg, Rng& rng);

/// Product of p_e over live edges and (1 - p_e) over blocked ones.
double realization_probability(const MultiLevelGraph& mlg, const FullRealization& phi);

/// Reveals edge outcomes on demand. Implementations must answer each edge at
/// most once per diffusion; the deterministic ones answer consistently forever.
class EdgeOutcomes {
 public:
  virtual ~EdgeOutcomes() = default;
  virtual bool live(LayerEdgeId id, double prob) = 0;
};

/// A full realization defined implicitly by a seed: edge `id` is live iff
/// hash(seed, id) < p. Equivalent in distribution to sample_realization.
class HashedOutcomes final : public EdgeOutcomes {
 public:
  explicit HashedOutcomes(std::uint64_t seed) : seed_(seed) {}
  bool live(LayerEdgeId id, double prob) override { return hash_unit(seed_, id) < prob; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

class FixedOutcomes final : public EdgeOutcomes {
 public:
  explicit FixedOutcomes(const FullRealization& phi) : phi_(&phi) {}
  bool live(LayerEdgeId id, double) override { return phi_->live(id); }

 private:
  const FullRealization* phi_;
};

/// Fresh Bernoulli draw per query.
class SampledOutcomes final : public EdgeOutcomes {
 public:
  explicit SampledOutcomes(Rng& rng) : rng_(&rng) {}
  bool live(LayerEdgeId, double prob) override { return bernoulli(*rng_, prob); }

 private:
  Rng* rng_;
};

/// Set of feature nodes of a multi-level graph (bitmap over FeatureIndex).
class FeatureSet {
 public:
  FeatureSet() = default;
  FeatureSet(std::uint32_t users, std::uint32_t layers)
      : n_(users), q_(layers), bits_(std::size_t(users) * layers, 0) {}

  bool contains(FeatureIndex x) const { return bits_[x] != 0; }
  bool insert(FeatureIndex x) {
    if (bits_[x]) return false;
    bits_[x] = 1;
    ++count_;
    return true;
  }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::uint32_t users() const { return n_; }
  std::uint32_t layers() const { return q_; }

  /// Users whose feature node in `layer` is a member, ascending.
  std::vector<NodeId> layer(std::uint32_t layer) const;
  bool has_all_features(NodeId u) const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::uint32_t n_ = 0, q_ = 0;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// Per-layer reachability: layer i of the result is I_phi(S^i).
FeatureSet diffuse(const MultiLevelGraph& mlg, const FullRealization& phi, std::span<const NodeId> seeds);
FeatureSet diffuse(const MultiLevelGraph& mlg, EdgeOutcomes& outcomes, std::span<const NodeId> seeds);

/// Sum over users of b(u) times the weight of their accepted features, i.e.
/// the expected profit with uniform thresholds integrated out.
double profit(const SocialNetwork& net, const FeatureSet& accepted);

struct Observation {
  std::vector<FeatureIndex> infected;  // A(seed): newly accepted, seed's own feature nodes excluded
  double gained_profit = 0;            // profit mass of every newly accepted feature node
};

/// Observed edge states, the ordered seed list and the accepted feature nodes
/// under full-adoption feedback. Also tracks the residual profit mass
/// W = sum of b(v) w_v^i over unaccepted feature nodes and its minimum term W*.
class PartialRealization {
 public:
  PartialRealization(const SocialNetwork& net, const MultiLevelGraph& mlg);

  EdgeState state(LayerEdgeId id) const { return states_[id]; }
  std::span<const EdgeState> states() const { return states_; }
  const FeatureSet& accepted() const { return accepted_; }
  const std::vector<NodeId>& dom() const { return dom_; }
  bool selected(NodeId u) const { return selected_[u] != 0; }

  double residual_weight() const { return weight_; }
  double residual_min_value() const { return min_value_; }
  std::uint32_t residual_node_count() const {
    return static_cast<std::uint32_t>(std::size_t(accepted_.users()) * accepted_.layers() - accepted_.size());
  }

 private:
  friend Observation observe(PartialRealization&, const MultiLevelGraph&, const SocialNetwork&, NodeId,
                                    EdgeOutcomes&);

  std::vector<EdgeState> states_;
  FeatureSet accepted_;
  std::vector<NodeId> dom_;
  std::vector<std::uint8_t> selected_;
  double weight_ = 0;
  double min_value_ = 0;
};

class DuplicateSeedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Seeds `seed`, cascades its unaccepted feature nodes through the residual
/// graph and records the state of every edge leaving a newly accepted node.
/// Edges are drawn from `outcomes` the first time their tail is reached.
Observation observe(PartialRealization& partial, const MultiLevelGraph& mlg, const SocialNetwork& net, NodeId seed,
                    EdgeOutcomes& outcomes);

/// G_phi: the multi-level graph restricted to feature nodes not yet accepted.
class ResidualGraph {
 public:
  ResidualGraph(const SocialNetwork& net, const MultiLevelGraph& mlg, const PartialRealization& partial)
      : net_(&net), mlg_(&mlg), partial_(&partial) {}

  const SocialNetwork& network() const { return *net_; }
  const MultiLevelGraph& graph() const { return *mlg_; }
  const PartialRealization& partial() const { return *partial_; }

  bool contains(FeatureIndex x) const { return !partial_->accepted().contains(x); }
  double weight() const { return partial_->residual_weight(); }
  double min_value() const { return partial_->residual_min_value(); }
  std::uint32_t node_count() const { return partial_->residual_node_count(); }
  bool empty() const { return node_count() == 0; }

  /// W recomputed from scratch.
  double recompute_weight() const;
  std::vector<FeatureIndex> nodes() const;

 private:
  const SocialNetwork* net_;
  const MultiLevelGraph* mlg_;
  const PartialRealization* partial_;
};

/// Forward cascade over feature nodes outside an excluded set, reusing
/// visitation buffers across calls.
class SpreadWorkspace {
 public:
  explicit SpreadWorkspace(const MultiLevelGraph& mlg) : stamp_(mlg.node_count(), 0) {}

  /// Profit mass reached from the feature nodes of `u` that are not in
  /// `excluded`, never entering excluded nodes. If `reached` is given, the
  /// visited feature nodes are appended to it.
  template <typename Outcomes>
  double spread(const SocialNetwork& net, const MultiLevelGraph& mlg, const FeatureSet& excluded, NodeId u,
                Outcomes& outcomes, std::vector<FeatureIndex>* reached = nullptr);

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> queue_;

  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
};

template <typename Outcomes>
double SpreadWorkspace::spread(const SocialNetwork& net, const MultiLevelGraph& mlg, const FeatureSet& excluded,
                               NodeId u, Outcomes& outcomes, std::vector<FeatureIndex>* reached) {
  const std::uint32_t n = mlg.user_count();
  double value = 0;
  next_epoch();
  for (std::uint32_t layer = 0; layer < mlg.layer_count(); ++layer) {
    const FeatureIndex base = layer * n;
    if (excluded.contains(base + u)) continue;
    queue_.clear();
    queue_.push_back(u);
    stamp_[base + u] = epoch_;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const NodeId v = queue_[head];
      value += net.feature_value(v, layer);
      if (reached) reached->push_back(base + v);
      for (EdgeId e : mlg.out_edges(v)) {
        const NodeId w = mlg.base_dst(e);
        const FeatureIndex x = base + w;
        if (stamp_[x] == epoch_ || excluded.contains(x)) continue;
        const LayerEdgeId id = mlg.edge_id(layer, e);
        if (outcomes.live(id, mlg.prob(id))) {
          stamp_[x] = epoch_;
          queue_.push_back(w);
        }
      }
    }
  }
  return value;
}

struct Estimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
};

/// Monte-Carlo P(S): mean profit of diffuse() over `simulations` sampled realizations.
Estimate estimate_profit(const SocialNetwork& net, const MultiLevelGraph& mlg, std::span<const NodeId> seeds,
                         std::uint64_t simulations, Rng& rng);

}  // namespace mfpm
