#pragma once

// Brute-force reference implementations used by the tests. They work on dense
// adjacency matrices and share no code with the library beyond building a
// Network for comparison.

#include <cstdint>
#include <string>
#include <vector>

#include "collabnet/model.hpp"

namespace oracle {

struct SmallGraph {
  std::size_t n = 0;
  bool directed = false;
  std::vector<std::vector<int>> a;  // a[i][j] = 1 for a tie i->j; symmetric if undirected

  std::size_t ties() const;
  // Symmetrized 0/1 matrix.
  std::vector<std::vector<int>> undirected() const;
};

collabnet::Network to_network(const SmallGraph& g);

// Fixed corpus of 200 graphs on 1..6 nodes: named families (empty, complete,
// star, path, cycle, two components) followed by pseudo-random graphs from a
// private LCG, both directed and undirected.
std::vector<SmallGraph> corpus();

double density(const SmallGraph& g);
double clustering(const SmallGraph& g);
// Floyd-Warshall; -1 marks unreachable.
std::vector<std::vector<long>> distances(const std::vector<std::vector<int>>& a);
// Returns -1 when no pair is reachable.
double average_path_length(const SmallGraph& g, bool respect_direction);
double degree_centrality(const SmallGraph& g, std::size_t v);
// Counts every geodesic by explicit path enumeration.
double betweenness_centrality(const SmallGraph& g, std::size_t v);
double closeness_centrality(const SmallGraph& g, std::size_t v);
// Dense symmetric eigen-solver on the largest component.
std::vector<double> eigenvector_centrality(const SmallGraph& g);
double centralization(const std::vector<double>& scores, double star_sum);

// Sum over all ordered node pairs of the modularity kernel.
double modularity(const std::vector<std::vector<double>>& w, const std::vector<std::size_t>& c);

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance from the angle between unit vectors.
double chord_distance_km(double lat1, double lon1, double lat2, double lon2);

// Tiny deterministic generator for oracle-side randomness.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_ >> 11;
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-42; }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
