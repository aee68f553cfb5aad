#include "mfpm/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

namespace mfpm {

RRCollection::RRCollection(std::uint32_t users, std::uint32_t layers, double weight)
    : n_(users), q_(layers), weight_(weight), index_(std::size_t(users) * layers), user_hits_(users, 0) {}

void RRCollection::add(FeatureIndex target, std::span<const FeatureIndex> members) {
  const auto j = static_cast<std::uint32_t>(targets_.size());
  targets_.push_back(target);
  members_.insert(members_.end(), members.begin(), members.end());
  offsets_.push_back(members_.size());
  scratch_.clear();
  for (FeatureIndex x : members) {
    index_[x].push_back(j);
    scratch_.push_back(x % n_);
  }
  if (q_ > 1) {
    std::sort(scratch_.begin(), scratch_.end());
    scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
  }
  for (NodeId u : scratch_) ++user_hits_[u];
}

namespace {

std::vector<double> target_weights(const ResidualGraph& residual, const std::vector<FeatureIndex>& targets) {
  const auto& net = residual.network();
  const auto& mlg = residual.graph();
  std::vector<double> w;
  w.reserve(targets.size());
  for (FeatureIndex x : targets) {
    auto f = mlg.node(x);
    w.push_back(net.feature_value(f.user, f.feature));
  }
  return w;
}

}  // namespace

RRSampler::RRSampler(const ResidualGraph& residual)
    : residual_(&residual), targets_(residual.nodes()), stamp_(residual.graph().node_count(), 0) {
  if (targets_.empty()) throw EmptyResidualError("cannot sample RR sets: residual graph is empty");
  auto w = target_weights(residual, targets_);
  weight_ = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(weight_ > 0)) throw EmptyResidualError("cannot sample RR sets: residual profit mass is zero");
  pick_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

void RRSampler::fill(Rng& rng, RRSet& out) {
  const auto& mlg = residual_->graph();
  const auto& accepted = residual_->partial().accepted();
  const std::uint32_t n = mlg.user_count();

  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  out.target = targets_[pick_(rng)];
  out.members.clear();
  out.members.push_back(out.target);
  stamp_[out.target] = epoch_;
  const std::uint32_t layer = mlg.layer_of(out.target);
  const FeatureIndex base = layer * n;
  for (std::size_t head = 0; head < out.members.size(); ++head) {
    const NodeId v = out.members[head] - base;
    for (EdgeId e : mlg.in_edges(v)) {
      const FeatureIndex x = base + mlg.base_src(e);
      if (stamp_[x] == epoch_ || accepted.contains(x)) continue;
      if (bernoulli(rng, mlg.prob(mlg.edge_id(layer, e)))) {
        stamp_[x] = epoch_;
        out.members.push_back(x);
      }
    }
  }
}

RRSet RRSampler::sample(Rng& rng) {
  RRSet out;
  fill(rng, out);
  return out;
}

void RRSampler::sample_into(RRCollection& out, std::uint64_t count, Rng& rng) {
  for (std::uint64_t k = 0; k < count; ++k) {
    fill(rng, scratch_);
    out.add(scratch_);
  }
}

RRCollection RRSampler::make_collection() const {
  const auto& mlg = residual_->graph();
  return RRCollection(mlg.user_count(), mlg.layer_count(), weight_);
}

RRSet sample_rr_set(const ResidualGraph& residual, Rng& rng) { return RRSampler(residual).sample(rng); }

double coverage_F(const RRCollection& coll, NodeId u) {
  if (coll.size() == 0) throw std::invalid_argument("coverage_F: empty RR collection");
  return static_cast<double>(coll.hits(u)) / static_cast<double>(coll.size());
}

double rho(const RRCollection& coll, NodeId u) { return coll.weight() * coverage_F(coll, u); }

double ratio_Q(const RRCollection& coll, const SocialNetwork& net, NodeId u) {
  return coverage_F(coll, u) / net.cost(u);
}

namespace {

std::uint64_t chernoff_count(double total, double floor_value, double eps, double delta_prime, const char* name) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument(std::string(name) + ": error parameter must lie in (0,1)");
  if (!(delta_prime > 0 && delta_prime <= 1)) {
    throw std::invalid_argument(std::string(name) + ": delta' must lie in (0,1]");
  }
  if (!(floor_value > 0)) throw std::invalid_argument(std::string(name) + ": lower bound must be positive");
  double value = (2 + eps) * total / (eps * eps * floor_value) * std::log(1 / delta_prime);
  if (!(value < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil(std::max(0.0, value)));
}

}  // namespace

std::uint64_t chernoff_lambda(double q_total, double q_star, double eta, double delta_prime) {
  return chernoff_count(q_total, q_star, eta, delta_prime, "chernoff_lambda");
}

std::uint64_t chernoff_alpha(double weight, double min_value, double eps_hat, double delta_prime) {
  return chernoff_count(weight, min_value, eps_hat, delta_prime, "chernoff_alpha");
}

double tail_profit_bound(const SocialNetwork& net, double budget) {
  std::vector<NodeId> order(net.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return net.cost(a) < net.cost(b); });
  double cost = 0, profit = 0;
  // Walk from the costliest node down while the suffix still fits.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (cost + net.cost(*it) > budget) break;
    cost += net.cost(*it);
    profit += net.profit(*it);
  }
  return profit;
}

std::uint64_t cap_samples(std::uint64_t count, std::uint64_t cap, bool& hit, const char* what) {
  if (count <= cap) return count;
  if (!hit) std::clog << "warning: " << what << " needs " << count << " samples; capped at " << cap << "\n";
  hit = true;
  return cap;
}

}  // namespace mfpm
