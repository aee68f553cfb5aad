#include "mfpm/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfpm {

FullRealization sample_realization(const MultiLevelGraph& mlg, Rng& rng) {
  FullRealization phi(mlg.edge_count());
  for (LayerEdgeId id = 0; id < mlg.edge_count(); ++id) phi.set(id, bernoulli(rng, mlg.prob(id)));
  return phi;
}

double realization_probability(const MultiLevelGraph& mlg, const FullRealization& phi) {
  double pr = 1.0;
  for (LayerEdgeId id = 0; id < mlg.edge_count(); ++id) {
    pr *= phi.live(id) ? mlg.prob(id) : 1.0 - mlg.prob(id);
  }
  return pr;
}

std::vector<NodeId> FeatureSet::layer(std::uint32_t layer) const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < n_; ++u) {
    if (bits_[std::size_t(layer) * n_ + u]) out.push_back(u);
  }
  return out;
}

bool FeatureSet::has_all_features(NodeId u) const {
  for (std::uint32_t i = 0; i < q_; ++i) {
    if (!bits_[std::size_t(i) * n_ + u]) return false;
  }
  return true;
}

namespace {

template <typename IsLive>
FeatureSet diffuse_impl(const MultiLevelGraph& mlg, std::span<const NodeId> seeds, IsLive&& is_live) {
  const std::uint32_t n = mlg.user_count();
  FeatureSet accepted(n, mlg.layer_count());
  std::vector<NodeId> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<NodeId> queue;
  for (std::uint32_t layer = 0; layer < mlg.layer_count(); ++layer) {
    const FeatureIndex base = layer * n;
    queue.clear();
    for (NodeId s : sorted) {
      if (s >= n) throw std::out_of_range("seed node out of range");
      if (accepted.insert(base + s)) queue.push_back(s);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (EdgeId e : mlg.out_edges(queue[head])) {
        const NodeId w = mlg.base_dst(e);
        if (accepted.contains(base + w)) continue;
        const LayerEdgeId id = mlg.edge_id(layer, e);
        if (is_live(id)) {
          accepted.insert(base + w);
          queue.push_back(w);
        }
      }
    }
  }
  return accepted;
}

}  // namespace

FeatureSet diffuse(const MultiLevelGraph& mlg, const FullRealization& phi, std::span<const NodeId> seeds) {
  return diffuse_impl(mlg, seeds, [&](LayerEdgeId id) { return phi.live(id); });
}

FeatureSet diffuse(const MultiLevelGraph& mlg, EdgeOutcomes& outcomes, std::span<const NodeId> seeds) {
  return diffuse_impl(mlg, seeds, [&](LayerEdgeId id) { return outcomes.live(id, mlg.prob(id)); });
}

double profit(const SocialNetwork& net, const FeatureSet& accepted) {
  double total = 0;
  for (NodeId u = 0; u < net.node_count(); ++u) {
    double bought = 0;
    for (std::uint32_t i = 0; i < net.feature_count(); ++i) {
      if (accepted.contains(i * net.node_count() + u)) bought += net.weight(u, i);
    }
    total += net.profit(u) * bought;
  }
  return total;
}

namespace {

double min_residual_value(const SocialNetwork& net, const FeatureSet& accepted) {
  const std::uint32_t n = net.node_count();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < net.feature_count(); ++i) {
    for (NodeId u = 0; u < n; ++u) {
      if (!accepted.contains(i * n + u)) best = std::min(best, net.feature_value(u, i));
    }
  }
  return std::isinf(best) ? 0.0 : best;
}

}  // namespace

PartialRealization::PartialRealization(const SocialNetwork& net, const MultiLevelGraph& mlg)
    : states_(mlg.edge_count(), EdgeState::unknown),
      accepted_(mlg.user_count(), mlg.layer_count()),
      selected_(mlg.user_count(), 0),
      weight_(net.total_profit()),
      min_value_(min_residual_value(net, accepted_)) {}

Observation observe(PartialRealization& partial, const MultiLevelGraph& mlg, const SocialNetwork& net, NodeId seed,
                    EdgeOutcomes& outcomes) {
  const std::uint32_t n = mlg.user_count();
  if (seed >= n) throw std::out_of_range("seed node out of range");
  if (partial.selected_[seed]) throw DuplicateSeedError("node " + net.label(seed) + " is already a seed");
  partial.selected_[seed] = 1;
  partial.dom_.push_back(seed);

  Observation obs;
  std::vector<NodeId> queue;
  for (std::uint32_t layer = 0; layer < mlg.layer_count(); ++layer) {
    const FeatureIndex base = layer * n;
    if (!partial.accepted_.insert(base + seed)) continue;
    obs.gained_profit += net.feature_value(seed, layer);
    queue.assign(1, seed);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (EdgeId e : mlg.out_edges(queue[head])) {
        const LayerEdgeId id = mlg.edge_id(layer, e);
        auto& state = partial.states_[id];
        if (state == EdgeState::unknown) {
          state = outcomes.live(id, mlg.prob(id)) ? EdgeState::live : EdgeState::blocked;
        }
        const NodeId w = mlg.base_dst(e);
        if (state == EdgeState::live && partial.accepted_.insert(base + w)) {
          obs.infected.push_back(base + w);
          obs.gained_profit += net.feature_value(w, layer);
          queue.push_back(w);
        }
      }
    }
  }

  if (partial.residual_node_count() == 0) {
    partial.weight_ = 0;
  } else {
    partial.weight_ = std::max(0.0, partial.weight_ - obs.gained_profit);
  }
  partial.min_value_ = min_residual_value(net, partial.accepted_);
  return obs;
}

double ResidualGraph::recompute_weight() const {
  double total = 0;
  for (FeatureIndex x : nodes()) {
    auto f = mlg_->node(x);
    total += net_->feature_value(f.user, f.feature);
  }
  return total;
}

std::vector<FeatureIndex> ResidualGraph::nodes() const {
  std::vector<FeatureIndex> out;
  out.reserve(node_count());
  for (FeatureIndex x = 0; x < mlg_->node_count(); ++x) {
    if (contains(x)) out.push_back(x);
  }
  return out;
}

Estimate estimate_profit(const SocialNetwork& net, const MultiLevelGraph& mlg, std::span<const NodeId> seeds,
                         std::uint64_t simulations, Rng& rng) {
  if (simulations == 0) throw std::invalid_argument("estimate_profit: simulation count must be positive");
  double sum = 0, sum_sq = 0;
  for (std::uint64_t k = 0; k < simulations; ++k) {
    SampledOutcomes outcomes(rng);
    double value = profit(net, diffuse(mlg, outcomes, seeds));
    sum += value;
    sum_sq += value * value;
  }
  Estimate est;
  est.samples = simulations;
  est.mean = sum / simulations;
  if (simulations > 1) {
    double var = std::max(0.0, (sum_sq - sum * sum / simulations) / (simulations - 1));
    est.std_error = std::sqrt(var / simulations);
  }
  return est;
}

}  // namespace mfpm
