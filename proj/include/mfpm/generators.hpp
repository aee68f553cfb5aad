#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "mfpm/network.hpp"

namespace mfpm {

/// Preferential attachment: every new node links to `links` distinct existing
/// nodes chosen proportionally to degree. Returned as undirected pairs.
EdgeList barabasi_albert(std::uint32_t nodes, std::uint32_t links, std::uint64_t seed);

/// G(n, m) directed random graph without self-loops or duplicates.
EdgeList erdos_renyi(std::uint32_t nodes, std::uint64_t edges, std::uint64_t seed);

void write_edge_list(std::ostream& out, const EdgeList& list);

}  // namespace mfpm
