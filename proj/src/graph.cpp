#include "collabnet/graph.hpp"

#include <deque>
#include <numeric>

namespace collabnet {

std::size_t degree_at(const Network& net, std::size_t node, DegreeMode mode) {
  if (!net.directed()) return net.out_neighbors(node).size();
  switch (mode) {
    case DegreeMode::in: return net.in_neighbors(node).size();
    case DegreeMode::out: return net.out_neighbors(node).size();
    case DegreeMode::total:
      return net.in_neighbors(node).size() + net.out_neighbors(node).size();
  }
  return 0;
}

std::size_t degree(const Network& net, std::string_view node, DegreeMode mode) {
  return degree_at(net, net.require_index(node), mode);
}

double weighted_degree(const Network& net, std::string_view node, DegreeMode mode) {
  const auto i = net.require_index(node);
  auto sum = [](std::span<const Neighbor> list) {
    double s = 0.0;
    for (const auto& n : list) s += n.weight;
    return s;
  };
  if (!net.directed()) return sum(net.out_neighbors(i));
  switch (mode) {
    case DegreeMode::in: return sum(net.in_neighbors(i));
    case DegreeMode::out: return sum(net.out_neighbors(i));
    case DegreeMode::total: return sum(net.in_neighbors(i)) + sum(net.out_neighbors(i));
  }
  return 0.0;
}

std::vector<long> bfs_hops(const Network& net, std::size_t source, bool respect_direction) {
  std::vector<long> hops(net.node_count(), kUnreachable);
  std::deque<std::size_t> queue{source};
  hops[source] = 0;
  const bool both_ways = net.directed() && !respect_direction;
  auto visit = [&](std::size_t from, std::span<const Neighbor> list) {
    for (const auto& n : list) {
      if (hops[n.node] == kUnreachable) {
        hops[n.node] = hops[from] + 1;
        queue.push_back(n.node);
      }
    }
  };
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    visit(u, net.out_neighbors(u));
    if (both_ways) visit(u, net.in_neighbors(u));
  }
  return hops;
}

HopMap shortest_path_lengths(const Network& net, std::string_view source, bool respect_direction) {
  const auto hops = bfs_hops(net, net.require_index(source), respect_direction);
  HopMap out;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    out.emplace(net.node(i), hops[i] == kUnreachable
                                 ? std::nullopt
                                 : std::optional<std::size_t>(static_cast<std::size_t>(hops[i])));
  }
  return out;
}

Network undirected_view(const Network& net) {
  if (!net.directed()) return net;
  return Network(net.layer(), false, net.nodes(), net.edges(), DuplicatePolicy::accumulate);
}

std::vector<std::vector<std::size_t>> component_indices(const Network& net) {
  const std::size_t n = net.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : net.edges()) {
    auto a = find(e.src);
    auto b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<std::size_t>> components;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return components;
}

std::vector<std::vector<std::string>> connected_components(const Network& net) {
  std::vector<std::vector<std::string>> out;
  for (const auto& comp : component_indices(net)) {
    auto& ids = out.emplace_back();
    for (auto i : comp) ids.push_back(net.node(i));
  }
  return out;
}

}  // namespace collabnet
