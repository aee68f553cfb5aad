#include "mfpm/policies.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace mfpm {

bool PolicyResult::same_outcome(const PolicyResult& other) const {
  return seeds == other.seeds && total_cost == other.total_cost && realized_profit == other.realized_profit &&
         estimated_profit == other.estimated_profit && trace == other.trace && samples_used == other.samples_used &&
         cap_hit == other.cap_hit;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_budget(double budget) {
  if (!(budget > 0) || !std::isfinite(budget)) throw BudgetError("budget must be a positive finite number");
}

// Expected-knapsack admission of a candidate that overflows the budget.
// Returns whether it is included; the caller terminates either way.
bool admit_overflow(double spent, double cost, double budget, Rng& rng, const PolicyOptions& options) {
  if (options.deterministic_knapsack) return false;
  return uniform01(rng) < (budget - spent) / cost;
}

struct Choice {
  NodeId node = 0;
  double marginal = 0;
};

// Shared select -> coin flip -> observe loop of every adaptive policy.
// `select` returns nullopt to stop early.
template <typename Select>
PolicyResult run_adaptive(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                          EdgeOutcomes& world, const PolicyOptions& options, Select&& select) {
  check_budget(budget);
  const auto start = Clock::now();
  PolicyResult result;
  PartialRealization partial(net, mlg);
  std::vector<NodeId> candidates;
  while (result.total_cost < budget && partial.dom().size() < net.node_count()) {
    candidates.clear();
    for (NodeId u = 0; u < net.node_count(); ++u) {
      if (!partial.selected(u)) candidates.push_back(u);
    }
    std::optional<Choice> choice = select(partial, std::span<const NodeId>(candidates), result);
    if (!choice) break;
    const double cost = net.cost(choice->node);
    TraceStep step{choice->node, choice->marginal, result.total_cost, std::nullopt};
    if (result.total_cost + cost > budget) {
      bool include = admit_overflow(result.total_cost, cost, budget, rng, options);
      step.coin = include;
      if (!include) {
        result.trace.push_back(step);
        break;
      }
    }
    result.seeds.push_back(choice->node);
    result.total_cost += cost;
    result.estimated_profit += choice->marginal;
    step.cumulative_cost = result.total_cost;
    result.trace.push_back(step);
    observe(partial, mlg, net, choice->node, world);
    if (step.coin) break;
  }
  result.realized_profit = profit(net, partial.accepted());
  result.wallclock = Clock::now() - start;
  return result;
}

// Argmax of score over candidates; ties go to the smallest node id because
// candidates are ascending and only a strictly larger score replaces the best.
template <typename Score>
std::optional<NodeId> argmax(std::span<const NodeId> candidates, Score&& score, double& best) {
  std::optional<NodeId> arg;
  best = -std::numeric_limits<double>::infinity();
  for (NodeId u : candidates) {
    double s = score(u);
    if (s > best) {
      best = s;
      arg = u;
    }
  }
  return arg;
}

}  // namespace

MepicParams MepicParams::compute(double epsilon, double weight, double min_value, std::uint64_t candidates) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("MEPIC: epsilon must lie in (0,1)");
  if (!(weight > 0) || !(min_value > 0)) throw std::invalid_argument("MEPIC: W and W* must be positive");
  if (candidates == 0) throw std::invalid_argument("MEPIC: candidate set is empty");
  MepicParams p;
  p.delta = 0.01 * epsilon / weight;
  p.eps_prime = (epsilon - p.delta * weight) / (1 - p.delta * weight);
  p.eps_bar = p.eps_prime / (1 - p.eps_prime);
  double span = (2 + 2 * p.eps_bar / 3) * weight / (p.eps_bar * p.eps_bar);
  p.i_max = static_cast<std::uint32_t>(std::max(0.0, std::ceil(std::log2(span)))) + 1;
  p.a = std::log(2.0 * p.i_max / p.delta);
  double theta = (std::log(2 / p.delta) + std::log(static_cast<double>(candidates))) / min_value;
  p.theta0 = theta < 1.8e19 ? static_cast<std::uint64_t>(std::ceil(theta)) : std::numeric_limits<std::uint64_t>::max();
  p.theta0 = std::max<std::uint64_t>(p.theta0, 1);
  return p;
}

double mepic_lower_bound(double ratio, double a, std::uint64_t sets) {
  const double s = static_cast<double>(sets);
  double root = std::sqrt(ratio + 2 * a / (9 * s)) - std::sqrt(a / (2 * s));
  return root * root - a / (18 * s);
}

MepicResult mepic(const ResidualGraph& residual, std::span<const NodeId> candidates, double epsilon, Rng& rng,
                  std::uint64_t sample_cap) {
  const auto& net = residual.network();
  const auto params = MepicParams::compute(epsilon, residual.weight(), residual.min_value(), candidates.size());

  MepicResult out;
  std::uint64_t size = cap_samples(params.theta0, sample_cap, out.cap_hit, "MEPIC initial collection");
  RRSampler sampler(residual);
  auto first = sampler.make_collection();
  auto second = sampler.make_collection();
  sampler.sample_into(first, size, rng);
  sampler.sample_into(second, size, rng);

  for (std::uint32_t round = 1;; ++round) {
    const double n1 = static_cast<double>(first.size());
    double best = 0;
    auto arg = argmax(candidates, [&](NodeId u) { return first.hits(u) / (n1 * net.cost(u)); }, best);
    out.node = *arg;
    out.upper = best;
    out.coverage = first.hits(out.node) / n1;
    double q2 = static_cast<double>(second.hits(out.node)) / (second.size() * net.cost(out.node));
    out.lower = mepic_lower_bound(q2, params.a, second.size());
    out.rounds = round;
    out.rr_sets = first.size() + second.size();
    if (out.upper > 0 && out.lower / out.upper >= 1 - params.eps_prime) {
      out.bound_met = true;
      return out;
    }
    if (round >= params.i_max) return out;
    if (2 * size > sample_cap) {
      if (!out.cap_hit) std::clog << "warning: MEPIC doubling stopped at the sample cap " << sample_cap << "\n";
      out.cap_hit = true;
      return out;
    }
    sampler.sample_into(first, size, rng);
    sampler.sample_into(second, size, rng);
    size *= 2;
  }
}

PolicyResult modified_greedy(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget,
                             GreedyEstimator estimator, Rng& rng, EdgeOutcomes& world, const PolicyOptions& options) {
  check_budget(budget);
  const auto start = Clock::now();
  const std::uint32_t n = net.node_count();
  PolicyResult result;
  std::vector<std::uint8_t> chosen(n, 0);

  // Marginal-gain oracle state for each estimator.
  std::vector<HashedOutcomes> worlds;
  std::vector<FeatureSet> reached;
  SpreadWorkspace workspace(mlg);
  std::vector<FeatureIndex> scratch;

  PartialRealization empty(net, mlg);
  ResidualGraph full(net, mlg, empty);
  std::optional<RRCollection> rr;
  std::vector<std::uint64_t> gain;
  std::vector<std::uint8_t> covered;

  if (estimator == GreedyEstimator::monte_carlo) {
    if (options.mc_sims == 0) throw std::invalid_argument("modified_greedy: mc_sims must be positive");
    const std::uint64_t base = rng();
    for (std::uint64_t k = 0; k < options.mc_sims; ++k) {
      worlds.emplace_back(derive_seed(base, {k}));
      reached.emplace_back(n, mlg.layer_count());
    }
  } else {
    double q_total = net.total_profit();
    double q_star = tail_profit_bound(net, budget);
    if (!(q_star > 0)) q_star = *std::min_element(net.profits().begin(), net.profits().end());
    std::uint64_t lambda = cap_samples(chernoff_lambda(q_total, q_star, options.eta, options.delta_prime),
                                       options.sample_cap, result.cap_hit, "RIS greedy");
    RRSampler sampler(full);
    rr.emplace(sampler.make_collection());
    sampler.sample_into(*rr, lambda, rng);
    result.samples_used = lambda;
    gain.resize(n);
    for (NodeId u = 0; u < n; ++u) gain[u] = rr->hits(u);
    covered.assign(rr->size(), 0);
  }

  auto marginal_of = [&](NodeId v) -> double {
    if (estimator == GreedyEstimator::monte_carlo) {
      double sum = 0;
      for (std::size_t k = 0; k < worlds.size(); ++k) sum += workspace.spread(net, mlg, reached[k], v, worlds[k]);
      return sum / static_cast<double>(worlds.size());
    }
    return rr->size() == 0 ? 0.0 : rr->weight() * static_cast<double>(gain[v]) / static_cast<double>(rr->size());
  };

  auto commit = [&](NodeId v) {
    chosen[v] = 1;
    result.seeds.push_back(v);
    result.total_cost += net.cost(v);
    if (estimator == GreedyEstimator::monte_carlo) {
      for (std::size_t k = 0; k < worlds.size(); ++k) {
        scratch.clear();
        workspace.spread(net, mlg, reached[k], v, worlds[k], &scratch);
        for (FeatureIndex x : scratch) reached[k].insert(x);
      }
    } else {
      for (std::uint32_t i = 0; i < mlg.layer_count(); ++i) {
        for (std::uint32_t j : rr->sets_containing(i * n + v)) {
          if (covered[j]) continue;
          covered[j] = 1;
          for (FeatureIndex x : rr->members(j)) --gain[mlg.user_of(x)];
        }
      }
    }
  };

  std::vector<NodeId> candidates;
  while (result.total_cost < budget && result.seeds.size() < n) {
    candidates.clear();
    for (NodeId u = 0; u < n; ++u) {
      if (!chosen[u]) candidates.push_back(u);
    }
    std::vector<double> marginals(n, 0.0);
    double best = 0;
    auto arg = argmax(
        std::span<const NodeId>(candidates),
        [&](NodeId u) {
          marginals[u] = marginal_of(u);
          return marginals[u] / net.cost(u);
        },
        best);
    if (estimator == GreedyEstimator::monte_carlo) result.samples_used += candidates.size() * worlds.size();
    if (!arg || !(best > 0)) break;
    const NodeId v = *arg;
    TraceStep step{v, marginals[v], result.total_cost, std::nullopt};
    if (result.total_cost + net.cost(v) > budget) {
      bool include = admit_overflow(result.total_cost, net.cost(v), budget, rng, options);
      step.coin = include;
      if (!include) {
        result.trace.push_back(step);
        break;
      }
    }
    commit(v);
    result.estimated_profit += marginals[v];
    step.cumulative_cost = result.total_cost;
    result.trace.push_back(step);
    if (step.coin) break;
  }

  result.realized_profit = profit(net, diffuse(mlg, world, result.seeds));
  result.wallclock = Clock::now() - start;
  return result;
}

PolicyResult adaptive_greedy(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget,
                             std::uint64_t mc_sims, Rng& rng, EdgeOutcomes& world, const PolicyOptions& options) {
  if (mc_sims == 0) throw std::invalid_argument("adaptive_greedy: mc_sims must be positive");
  SpreadWorkspace workspace(mlg);
  std::vector<HashedOutcomes> worlds;
  worlds.reserve(mc_sims);
  return run_adaptive(
      net, mlg, budget, rng, world, options,
      [&](const PartialRealization& partial, std::span<const NodeId> candidates,
          PolicyResult& result) -> std::optional<Choice> {
        if (partial.residual_node_count() == 0) return std::nullopt;
        // Common random numbers: every candidate is scored on the same worlds.
        const std::uint64_t step_seed = rng();
        worlds.clear();
        for (std::uint64_t k = 0; k < mc_sims; ++k) worlds.emplace_back(derive_seed(step_seed, {k}));
        std::vector<double> marginal(net.node_count(), 0.0);
        double best = 0;
        auto arg = argmax(
            candidates,
            [&](NodeId u) {
              if (partial.accepted().has_all_features(u)) return 0.0;
              double sum = 0;
              for (auto& w : worlds) sum += workspace.spread(net, mlg, partial.accepted(), u, w);
              result.samples_used += mc_sims;
              marginal[u] = sum / static_cast<double>(mc_sims);
              return marginal[u] / net.cost(u);
            },
            best);
        if (!arg || !(best > 0)) return std::nullopt;
        return Choice{*arg, marginal[*arg]};
      });
}

PolicyResult sampled_adap_greedy(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, double epsilon,
                                 Rng& rng, EdgeOutcomes& world, const PolicyOptions& options) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("sampled_adap_greedy: epsilon must lie in (0,1)");
  return run_adaptive(net, mlg, budget, rng, world, options,
                      [&](const PartialRealization& partial, std::span<const NodeId> candidates,
                          PolicyResult& result) -> std::optional<Choice> {
                        ResidualGraph residual(net, mlg, partial);
                        if (residual.empty() || !(residual.weight() > 0) || !(residual.min_value() > 0)) {
                          return std::nullopt;
                        }
                        auto picked = mepic(residual, candidates, epsilon, rng, options.sample_cap);
                        result.samples_used += picked.rr_sets;
                        result.cap_hit = result.cap_hit || picked.cap_hit;
                        if (!(picked.upper > 0)) return std::nullopt;
                        return Choice{picked.node, residual.weight() * picked.coverage};
                      });
}

PolicyResult heuristic_ar(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                          EdgeOutcomes& world, const PolicyOptions& options) {
  return run_adaptive(net, mlg, budget, rng, world, options,
                      [&](const PartialRealization&, std::span<const NodeId> candidates,
                          PolicyResult&) -> std::optional<Choice> {
                        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
                        return Choice{candidates[pick(rng)], 0.0};
                      });
}

PolicyResult heuristic_amd(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                           EdgeOutcomes& world, const PolicyOptions& options) {
  std::vector<NodeId> order(net.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return net.out_degree(a) > net.out_degree(b); });
  std::size_t cursor = 0;
  return run_adaptive(net, mlg, budget, rng, world, options,
                      [&](const PartialRealization& partial, std::span<const NodeId>,
                          PolicyResult&) -> std::optional<Choice> {
                        while (cursor < order.size() && partial.selected(order[cursor])) ++cursor;
                        if (cursor == order.size()) return std::nullopt;
                        return Choice{order[cursor], 0.0};
                      });
}

PolicyResult heuristic_amp(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget, Rng& rng,
                           EdgeOutcomes& world, const PolicyOptions& options) {
  return run_adaptive(
      net, mlg, budget, rng, world, options,
      [&](const PartialRealization& partial, std::span<const NodeId> candidates,
          PolicyResult& result) -> std::optional<Choice> {
        ResidualGraph residual(net, mlg, partial);
        if (residual.empty() || !(residual.weight() > 0) || !(residual.min_value() > 0)) return std::nullopt;
        std::uint64_t alpha =
            chernoff_alpha(residual.weight(), residual.min_value(), options.eps_hat, options.delta_prime);
        alpha = std::max<std::uint64_t>(cap_samples(alpha, options.sample_cap, result.cap_hit, "max-profit heuristic"), 1);
        RRSampler sampler(residual);
        auto coll = sampler.make_collection();
        sampler.sample_into(coll, alpha, rng);
        result.samples_used += alpha;
        double best = 0;
        auto arg = argmax(candidates, [&](NodeId u) { return rho(coll, u); }, best);
        if (!arg || !(best > 0)) return std::nullopt;
        return Choice{*arg, best};
      });
}

}  // namespace mfpm
