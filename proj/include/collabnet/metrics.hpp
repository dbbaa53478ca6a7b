#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "collabnet/model.hpp"

namespace collabnet {

enum class CentralityMeasure { degree, betweenness, closeness, eigenvector };

std::string_view to_string(CentralityMeasure measure);
CentralityMeasure parse_centrality(std::string_view text);
inline constexpr CentralityMeasure kAllCentralities[] = {
    CentralityMeasure::degree, CentralityMeasure::betweenness, CentralityMeasure::closeness,
    CentralityMeasure::eigenvector};

// Directed: m / (n(n-1)); undirected: 2m / (n(n-1)).
double density(const Network& net);

// Total-degree convention 2m/n for both directed and undirected layers.
double average_degree(const Network& net);

// Mean local clustering on the undirected view. Nodes with fewer than two
// neighbours count as 0 and stay in the mean.
double clustering_coefficient(const Network& net);

// Mean hop count over reachable ordered pairs, self-pairs and unreachable
// pairs excluded.
double average_path_length(const Network& net, bool respect_direction);

// Normalized scores in node order, each in [0, 1]. All measures use the
// undirected view. Eigenvector scores are computed on the largest component
// (nodes elsewhere score 0) by shifted power iteration.
std::vector<double> centrality_scores(const Network& net, CentralityMeasure measure);
std::map<std::string, double> centrality(const Network& net, CentralityMeasure measure);

// Freeman centralization: sum of (max - c_i) over normalized scores divided
// by the same sum for the n-node star, clamped to [0, 1]. The star values are
// n-2 (degree), n-1 (betweenness), (n-1)(n-2)/(2n-3) (closeness) and
// (n-1)(1 - 1/sqrt(n-1)) (eigenvector).
double centralization(const Network& net, CentralityMeasure measure);
double star_centralization_sum(std::size_t n, CentralityMeasure measure);
double centralization_from_scores(const std::vector<double>& scores, CentralityMeasure measure);

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t ties = 0;
  double density = 0.0;
  double avg_degree = 0.0;
  double clustering = 0.0;
  double avg_path_length = 0.0;
  std::map<CentralityMeasure, double> centralization;
  bool path_length_respects_direction = true;

  std::string to_csv() const;
  std::string to_json() const;
};

// Path lengths follow edge direction on directed layers.
MetricsReport compute_metrics(const Network& net);

}  // namespace collabnet
