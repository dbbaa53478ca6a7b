#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/model.hpp"

namespace collabnet {

enum class DegreeMode { in, out, total };

// Number of incident ties. For undirected networks every mode returns the
// same count.
std::size_t degree(const Network& net, std::string_view node, DegreeMode mode);
double weighted_degree(const Network& net, std::string_view node, DegreeMode mode);

std::size_t degree_at(const Network& net, std::size_t node, DegreeMode mode);

inline constexpr long kUnreachable = -1;

// Breadth-first hop counts from one node; weights are ignored.
std::vector<long> bfs_hops(const Network& net, std::size_t source, bool respect_direction);

using HopMap = std::map<std::string, std::optional<std::size_t>>;
HopMap shortest_path_lengths(const Network& net, std::string_view source, bool respect_direction);

// Symmetrized copy: {i,j} present iff i->j or j->i, weights summed.
// Undirected input is returned unchanged.
Network undirected_view(const Network& net);

// Weak components as node-index lists, each sorted, ordered by first member.
std::vector<std::vector<std::size_t>> component_indices(const Network& net);
std::vector<std::vector<std::string>> connected_components(const Network& net);

}  // namespace collabnet
