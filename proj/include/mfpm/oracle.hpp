#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfpm/diffusion.hpp"
#include "mfpm/network.hpp"

namespace mfpm {

/// Upper limit on the number of enumerated edges (2^max_edges realizations).
struct EnumerationBudget {
  int max_edges = 20;
};

class EnumerationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// P(S) by summing Pr[phi] * profit over every realization of the multi-level graph.
double exact_P(const SocialNetwork& net, const MultiLevelGraph& mlg, std::span<const NodeId> seeds,
               EnumerationBudget budget = {});

/// Delta(u | partial): expectation of f(dom + u) - f(dom) over every completion
/// of the unknown edges, weighted by their product probability.
double exact_delta(const SocialNetwork& net, const MultiLevelGraph& mlg, const PartialRealization& partial, NodeId u,
                   EnumerationBudget budget = {});

struct Optimum {
  std::vector<NodeId> seeds;
  double value = 0;
};

/// argmax of exact_P over all S with c(S) <= B. Requires n <= 12.
Optimum exact_optimum(const SocialNetwork& net, const MultiLevelGraph& mlg, double budget,
                      EnumerationBudget enumeration = {});

}  // namespace mfpm
