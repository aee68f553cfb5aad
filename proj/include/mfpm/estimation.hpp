#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfpm/diffusion.hpp"
#include "mfpm/network.hpp"
#include "mfpm/random.hpp"

namespace mfpm {

/// Default hard limit on any computed sample count.
inline constexpr std::uint64_t kDefaultSampleCap = 10'000'000;

/// Reverse reachable set: a target feature node and every feature node of the
/// same layer that reaches it through live edges of one sampled realization.
struct RRSet {
  FeatureIndex target = 0;
  std::vector<FeatureIndex> members;  // target first, then reverse-BFS order
};

/// RR sets plus an inverted index from feature node to the sets containing it.
class RRCollection {
 public:
  RRCollection(std::uint32_t users, std::uint32_t layers, double weight);

  void add(const RRSet& set) { add(set.target, set.members); }
  void add(FeatureIndex target, std::span<const FeatureIndex> members);

  std::size_t size() const { return targets_.size(); }
  /// W of the residual graph the sets were drawn from.
  double weight() const { return weight_; }
  std::uint32_t users() const { return n_; }

  FeatureIndex target(std::size_t j) const { return targets_[j]; }
  std::span<const FeatureIndex> members(std::size_t j) const {
    return {members_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
  }
  std::span<const std::uint32_t> sets_containing(FeatureIndex x) const { return index_[x]; }

  /// Number of sets intersecting {u_1, ..., u_q}; each set counted once.
  std::uint64_t hits(NodeId u) const { return user_hits_[u]; }
  std::uint64_t total_members() const { return members_.size(); }

 private:
  std::uint32_t n_, q_;
  double weight_;
  std::vector<FeatureIndex> targets_;
  std::vector<std::size_t> offsets_{0};
  std::vector<FeatureIndex> members_;
  std::vector<std::vector<std::uint32_t>> index_;
  std::vector<std::uint64_t> user_hits_;
  std::vector<NodeId> scratch_;
};

class EmptyResidualError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Draws RR sets on a residual graph: the target is picked with probability
/// b(v) w_v^i / W among unaccepted feature nodes, then a reverse BFS flips each
/// in-edge of a reached node once. Nothing is cached across sets.
class RRSampler {
 public:
  explicit RRSampler(const ResidualGraph& residual);

  RRSet sample(Rng& rng);
  void sample_into(RRCollection& out, std::uint64_t count, Rng& rng);
  RRCollection make_collection() const;

  double weight() const { return weight_; }

 private:
  const ResidualGraph* residual_;
  std::vector<FeatureIndex> targets_;
  std::discrete_distribution<std::size_t> pick_;
  double weight_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  RRSet scratch_;

  void fill(Rng& rng, RRSet& out);
};

RRSet sample_rr_set(const ResidualGraph& residual, Rng& rng);

/// F_R(u): fraction of RR sets hit by a feature node of u.
double coverage_F(const RRCollection& coll, NodeId u);

/// W * F_R(u), an unbiased estimate of the conditional marginal profit of u.
double rho(const RRCollection& coll, NodeId u);

/// F_R(u) / c(u).
double ratio_Q(const RRCollection& coll, const SocialNetwork& net, NodeId u);

/// ceil((2 + eta) Q / (eta^2 Q*) * ln(1/delta')) RR sets for the non-adaptive
/// RIS greedy. Throws std::invalid_argument when Q* <= 0.
std::uint64_t chernoff_lambda(double q_total, double q_star, double eta, double delta_prime);

/// Same bound with W, W* of a residual graph; sample count for the max-profit
/// heuristic.
std::uint64_t chernoff_alpha(double weight, double min_value, double eps_hat, double delta_prime);

/// Q*: total profit of the costliest suffix of nodes (ascending cost order)
/// whose costs sum to at most B. Zero when even the costliest node exceeds B.
double tail_profit_bound(const SocialNetwork& net, double budget);

/// min(count, cap); sets `hit` and logs a warning when the cap binds.
std::uint64_t cap_samples(std::uint64_t count, std::uint64_t cap, bool& hit, const char* what);

}  // namespace mfpm
