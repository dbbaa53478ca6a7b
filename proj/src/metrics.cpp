#include "collabnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <json.hpp>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"

namespace collabnet {

namespace {

void require_nodes(const Network& net, std::size_t minimum, std::string_view what) {
  if (net.node_count() < minimum) {
    throw Error(ErrorCode::degenerate_input, std::string(what) + " needs at least " +
                                                 std::to_string(minimum) + " nodes, got " +
                                                 std::to_string(net.node_count()));
  }
}

// Unweighted neighbour sets of the undirected view.
std::vector<std::vector<std::size_t>> simple_adjacency(const Network& net) {
  const auto view = undirected_view(net);
  std::vector<std::vector<std::size_t>> adj(view.node_count());
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (const auto& nb : view.out_neighbors(i)) adj[i].push_back(nb.node);
  }
  return adj;
}

std::vector<double> degree_scores(const std::vector<std::vector<std::size_t>>& adj) {
  const double scale = static_cast<double>(adj.size() - 1);
  std::vector<double> out(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i) out[i] = static_cast<double>(adj[i].size()) / scale;
  return out;
}

// Brandes accumulation; every unordered pair is counted from both ends, hence
// the final halving.
std::vector<double> betweenness_scores(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<double> score(n, 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    stack.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      stack.push_back(v);
      for (auto w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) score[w] += delta[w];
    }
  }
  if (n < 3) return std::vector<double>(n, 0.0);
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (auto& v : score) v = v / 2.0 / pairs;
  return score;
}

std::vector<double> closeness_scores(const Network& net) {
  const auto view = undirected_view(net);
  const std::size_t n = view.node_count();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hops = bfs_hops(view, i, false);
    double reach = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || hops[j] == kUnreachable) continue;
      reach += 1.0;
      total += static_cast<double>(hops[j]);
    }
    if (reach > 0.0) out[i] = (reach / total) * (reach / static_cast<double>(n - 1));
  }
  return out;
}

std::vector<double> eigenvector_scores(const Network& net,
                                       const std::vector<std::vector<std::size_t>>& adj) {
  if (net.edge_count() == 0) {
    throw Error(ErrorCode::degenerate_input, "eigenvector centrality on a graph without edges");
  }
  const auto components = component_indices(undirected_view(net));
  const auto largest = std::max_element(
      components.begin(), components.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });

  const std::size_t n = adj.size();
  std::vector<char> member(n, 0);
  for (auto i : *largest) member[i] = 1;

  // Iterating with A + I keeps the spectrum positive so bipartite components
  // cannot oscillate; the eigenvectors are those of A.
  std::vector<double> x(n, 0.0), next(n, 0.0);
  for (auto i : *largest) x[i] = 1.0;
  constexpr double kTolerance = 1e-13;
  constexpr int kMaxIterations = 1'000'000;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double peak = 0.0;
    for (auto i : *largest) {
      double s = x[i];
      for (auto j : adj[i]) s += x[j];
      next[i] = s;
      peak = std::max(peak, s);
    }
    double change = 0.0;
    for (auto i : *largest) {
      next[i] /= peak;
      change = std::max(change, std::abs(next[i] - x[i]));
    }
    std::swap(x, next);
    if (change < kTolerance) break;
  }
  return x;
}

}  // namespace

std::string_view to_string(CentralityMeasure measure) {
  switch (measure) {
    case CentralityMeasure::degree: return "degree";
    case CentralityMeasure::betweenness: return "betweenness";
    case CentralityMeasure::closeness: return "closeness";
    case CentralityMeasure::eigenvector: return "eigenvector";
  }
  return "degree";
}

CentralityMeasure parse_centrality(std::string_view text) {
  for (auto m : kAllCentralities) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorCode::config, "unknown centrality measure '" + std::string(text) + "'");
}

double density(const Network& net) {
  require_nodes(net, 2, "density");
  const double n = static_cast<double>(net.node_count());
  const double m = static_cast<double>(net.edge_count());
  return (net.directed() ? m : 2.0 * m) / (n * (n - 1.0));
}

double average_degree(const Network& net) {
  require_nodes(net, 1, "average degree");
  return 2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(net.node_count());
}

double clustering_coefficient(const Network& net) {
  require_nodes(net, 3, "clustering coefficient");
  const auto adj = simple_adjacency(net);
  const std::size_t n = adj.size();
  std::vector<char> mark(n, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = adj[i].size();
    if (k < 2) continue;
    for (auto j : adj[i]) mark[j] = 1;
    std::size_t links = 0;
    for (auto j : adj[i]) {
      for (auto h : adj[j]) {
        if (mark[h]) ++links;
      }
    }
    for (auto j : adj[i]) mark[j] = 0;
    // links counts each neighbour pair twice.
    total += static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return total / static_cast<double>(n);
}

double average_path_length(const Network& net, bool respect_direction) {
  double total = 0.0;
  double pairs = 0.0;
  for (std::size_t s = 0; s < net.node_count(); ++s) {
    const auto hops = bfs_hops(net, s, respect_direction);
    for (std::size_t t = 0; t < hops.size(); ++t) {
      if (t == s || hops[t] == kUnreachable) continue;
      total += static_cast<double>(hops[t]);
      pairs += 1.0;
    }
  }
  if (pairs == 0.0) {
    throw Error(ErrorCode::degenerate_input, "average path length: no reachable pairs");
  }
  return total / pairs;
}

std::vector<double> centrality_scores(const Network& net, CentralityMeasure measure) {
  require_nodes(net, 2, "centrality");
  const auto adj = simple_adjacency(net);
  switch (measure) {
    case CentralityMeasure::degree: return degree_scores(adj);
    case CentralityMeasure::betweenness: return betweenness_scores(adj);
    case CentralityMeasure::closeness: return closeness_scores(net);
    case CentralityMeasure::eigenvector: return eigenvector_scores(net, adj);
  }
  return {};
}

std::map<std::string, double> centrality(const Network& net, CentralityMeasure measure) {
  const auto scores = centrality_scores(net, measure);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < scores.size(); ++i) out.emplace(net.node(i), scores[i]);
  return out;
}

double star_centralization_sum(std::size_t n, CentralityMeasure measure) {
  if (n < 3) throw Error(ErrorCode::degenerate_input, "centralization needs at least 3 nodes");
  const double k = static_cast<double>(n - 1);
  switch (measure) {
    case CentralityMeasure::degree: return k - 1.0;
    case CentralityMeasure::betweenness: return k;
    case CentralityMeasure::closeness: return k * (k - 1.0) / (2.0 * k - 1.0);
    case CentralityMeasure::eigenvector: return k * (1.0 - 1.0 / std::sqrt(k));
  }
  return k;
}

double centralization_from_scores(const std::vector<double>& scores, CentralityMeasure measure) {
  const double star = star_centralization_sum(scores.size(), measure);
  const double peak = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double c : scores) sum += peak - c;
  return std::clamp(sum / star, 0.0, 1.0);
}

double centralization(const Network& net, CentralityMeasure measure) {
  require_nodes(net, 3, "centralization");
  return centralization_from_scores(centrality_scores(net, measure), measure);
}

MetricsReport compute_metrics(const Network& net) {
  MetricsReport r;
  r.nodes = net.node_count();
  r.ties = net.edge_count();
  r.density = density(net);
  r.avg_degree = average_degree(net);
  r.clustering = clustering_coefficient(net);
  r.path_length_respects_direction = net.directed();
  r.avg_path_length = average_path_length(net, net.directed());
  for (auto m : kAllCentralities) r.centralization[m] = centralization(net, m);
  return r;
}

namespace {

std::vector<std::pair<std::string, std::string>> metric_rows(const MetricsReport& r) {
  using csv::format_number;
  return {
      {"nodes", std::to_string(r.nodes)},
      {"ties", std::to_string(r.ties)},
      {"density", format_number(r.density)},
      {"avg_degree", format_number(r.avg_degree)},
      {"clustering", format_number(r.clustering)},
      {"avg_path_length", format_number(r.avg_path_length)},
      {"centralization_degree", format_number(r.centralization.at(CentralityMeasure::degree))},
      {"centralization_betweenness",
       format_number(r.centralization.at(CentralityMeasure::betweenness))},
      {"centralization_closeness",
       format_number(r.centralization.at(CentralityMeasure::closeness))},
      {"centralization_eigenvector",
       format_number(r.centralization.at(CentralityMeasure::eigenvector))},
  };
}

}  // namespace

std::string MetricsReport::to_csv() const {
  std::string out;
  csv::append_row(out, {"key", "value"});
  for (const auto& [k, v] : metric_rows(*this)) csv::append_row(out, {k, v});
  return out;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["nodes"] = nodes;
  j["ties"] = ties;
  j["density"] = density;
  j["avg_degree"] = avg_degree;
  j["clustering"] = clustering;
  j["avg_path_length"] = avg_path_length;
  j["centralization_degree"] = centralization.at(CentralityMeasure::degree);
  j["centralization_betweenness"] = centralization.at(CentralityMeasure::betweenness);
  j["centralization_closeness"] = centralization.at(CentralityMeasure::closeness);
  j["centralization_eigenvector"] = centralization.at(CentralityMeasure::eigenvector);
  return j.dump(2) + "\n";
}

}  // namespace collabnet
