#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfpm/diffusion.hpp"
#include "mfpm/estimation.hpp"
#include "mfpm/network.hpp"
#include "mfpm/random.hpp"

namespace mfpm {

struct PolicyOptions {
  /// Off-spec regression mode: an overflowing candidate is never included.
  bool deterministic_knapsack = false;
  std::uint64_t sample_cap = kDefaultSampleCap;
  double epsilon = 0.5;      // MEPIC error parameter
  double eta = 0.1;          // RIS greedy relative error
  double delta_prime = 0.1;  // failure probability for both Chernoff bounds
  double eps_hat = 0.1;      // max-profit heuristic relative error
  std::uint64_t mc_sims = 500;
};

struct TraceStep {
  NodeId node = 0;
  double marginal = 0;         // estimated marginal profit of `node` when chosen
  double cumulative_cost = 0;  // cost of the seed set after this step
  std::optional<bool> coin;    // set when the candidate overflowed the budget

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct PolicyResult {
  std::vector<NodeId> seeds;
  double total_cost = 0;
  double realized_profit = 0;
  double estimated_profit = 0;
  std::vector<TraceStep> trace;
  std::uint64_t samples_used = 0;  // RR sets or Monte-Carlo cascades
  bool cap_hit = false;
  std::chrono::nanoseconds wallclock{0};

  /// Equality of everything except wall-clock time.
  bool same_outcome(const PolicyResult& other) const;
};

class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Derived constants of the doubling RR-sampling search.
struct MepicParams {
  double delta = 0;
  double eps_prime = 0;
  double eps_bar = 0;
  std::uint32_t i_max = 0;
  double a = 0;
  std::uint64_t theta0 = 0;

  static MepicParams compute(double epsilon, double weight, double min_value, std::uint64_t candidates);
};

struct MepicResult {
  NodeId node = 0;
  double upper = 0;     // Q^u = Q_R1(v*)
  double lower = 0;     // Q^l(v*) from R2
  double coverage = 0;  // F_R1(v*)
  std::uint32_t rounds = 0;
  std::uint64_t rr_sets = 0;  // total over both collections
  bool bound_met = false;
  bool cap_hit = false;
};

/// Lower confidence value for a coverage ratio measured on `sets` RR sets.
double mepic_lower_bound(double ratio, double a, std::uint64_t sets);

/// Picks a near-maximizer of Delta(v|phi)/c(v) over `candidates` (ascending
/// node ids) by growing two independent RR collections on the residual graph
/// until the R2 lower bound is within 1 - eps' of the R1 maximum.
MepicResult mepic(const ResidualGraph& residual, std::span<const NodeId> candidates, double epsilon, Rng& rng,
                  std::uint64_t sample_cap = kDefaultSampleCap);

enum class GreedyEstimator { monte_carlo, reverse_sampling };

/// Non-adaptive cost-effective greedy with the expected-knapsack coin flip.
/// Monte-Carlo marginals use `options.mc_sims` fixed worlds for the whole run;
/// RIS marginals use one shared collection of lambda RR sets. The returned
/// realized profit is measured in `world`.
PolicyResult modified_greedy(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget,
                             GreedyEstimator estimator, Rng& rng, EdgeOutcomes& world,
                             const PolicyOptions& options = {});

/// Adaptive greedy with Monte-Carlo estimates of Delta(v|phi) on the residual graph.
PolicyResult adaptive_greedy(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget,
                             std::uint64_t mc_sims, Rng& rng, EdgeOutcomes& world, const PolicyOptions& options = {});

/// Adaptive greedy driven by MEPIC.
PolicyResult sampled_adap_greedy(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, double epsilon,
                                 Rng& rng, EdgeOutcomes& world, const PolicyOptions& options = {});

/// Adaptive random: uniform over unselected nodes.
PolicyResult heuristic_ar(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                          EdgeOutcomes& world, const PolicyOptions& options = {});

/// Adaptive max-degree: static out-degree order, ties by node id.
PolicyResult heuristic_amd(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                           EdgeOutcomes& world, const PolicyOptions& options = {});

/// Adaptive max-profit: argmax rho(u|phi) on alpha fresh RR sets per step, cost ignored.
PolicyResult heuristic_amp(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                           EdgeOutcomes& world, const PolicyOptions& options = {});

}  // namespace mfpm
