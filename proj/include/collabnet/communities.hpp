#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "collabnet/model.hpp"

namespace collabnet {

// One agglomeration step. Community ids below the node count are the
// initial singletons (node indices); each merge creates id node_count + step.
struct MergeStep {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t merged = 0;
  double delta_sigma = 0.0;
};

struct Partition {
  std::vector<std::string> node_ids;
  std::vector<std::size_t> assignment;  // dense community index per node
  double modularity = 0.0;
  int walk_length = 0;
  std::vector<MergeStep> merges;

  // Renumbers communities densely in order of first appearance.
  static Partition from_labels(std::vector<std::string> node_ids,
                               const std::vector<std::size_t>& labels);

  std::size_t community_count() const;
  std::vector<std::size_t> sizes() const;  // indexed by community
  std::vector<std::vector<std::size_t>> members() const;

  std::string to_csv() const;         // id,community
  std::string merges_csv() const;     // step,left,right,merged,delta_sigma
};

Partition load_partition(const std::string& path, char delimiter = ',');

inline constexpr int kDefaultWalkLength = 4;

// Pons-Latapy random-walk agglomeration on the undirected weighted view.
// Isolated nodes stay singletons. Inside each connected component the pair of
// adjacent communities with the smallest increase in walk-distance variance
// merges first (ties go to the smallest id pair); the cut kept for each
// component is the one with the highest modularity along its merge sequence.
Partition walktrap(const Network& net, int walk_length = kDefaultWalkLength);

// Q = (1/2W) sum_ij (A_ij - k_i k_j / 2W) delta(c_i, c_j) on the undirected
// weighted view; 0 for a network without edges.
double modularity(const Network& net, const Partition& partition);

struct CommunitySummary {
  struct Row {
    std::size_t community;
    std::size_t size;
  };
  std::vector<Row> rows;  // sizes descending, ties by community index
  std::size_t singletons = 0;
  double largest_share = 0.0;

  std::string to_csv() const;  // community,size
};

CommunitySummary community_summary(const Partition& partition);

}  // namespace collabnet
