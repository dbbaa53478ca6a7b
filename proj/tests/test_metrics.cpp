#include <doctest.h>

#include <cmath>
#include <functional>

#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/metrics.hpp"
#include "oracles.hpp"

using namespace collabnet;

namespace {

constexpr double kTol = 1e-10;

Network undirected(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b, 1.0});
  return Network::for_layer(Layer::coauthorship, ids, edges);
}

Network complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> p;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) p.emplace_back(i, j);
  }
  return undirected(n, p);
}

Network cycle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(i, (i + 1) % n);
  return undirected(n, p);
}

Network star(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> p;
  for (std::size_t i = 1; i < n; ++i) p.emplace_back(0, i);
  return undirected(n, p);
}

bool throws_degenerate(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == ErrorCode::degenerate_input;
  }
  return false;
}

}  // namespace

TEST_CASE("small examples") {
  CHECK(density(complete(4)) == 1.0);
  CHECK(clustering_coefficient(complete(3)) == 1.0);
  CHECK(clustering_coefficient(undirected(3, {{0, 1}, {1, 2}})) == 0.0);
  CHECK(average_path_length(complete(4), false) == 1.0);
  CHECK(average_path_length(cycle(5), false) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(average_degree(undirected(4, {})) == 0.0);

  // a -> b with c isolated: the single reachable ordered pair has length 1
  const Network directed(Layer::information, true, {"a", "b", "c"}, {{0, 1, 1.0}},
                         DuplicatePolicy::collapse);
  CHECK(average_path_length(directed, true) == 1.0);

  const auto s = centrality_scores(star(5), CentralityMeasure::degree);
  CHECK(s[0] == 1.0);
  for (std::size_t i = 1; i < 5; ++i) CHECK(s[i] == 0.25);

  const auto b = centrality_scores(cycle(7), CentralityMeasure::betweenness);
  for (double x : b) CHECK(x == doctest::Approx(b[0]).epsilon(1e-14));
}

TEST_CASE("K4 minus one edge clustering matches triangle enumeration") {
  const auto net = undirected(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  oracle::SmallGraph g{4, false, {{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}};
  CHECK(std::abs(clustering_coefficient(net) - oracle::clustering(g)) < kTol);
  CHECK(std::abs(clustering_coefficient(net) - 5.0 / 6.0) < kTol);
}

TEST_CASE("centralization reference graphs") {
  for (std::size_t n = 3; n <= 9; ++n) {
    for (auto m : kAllCentralities) {
      CAPTURE(n);
      CAPTURE(to_string(m));
      CHECK(centralization(star(n), m) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(centralization(complete(n), m) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(std::abs(centralization(cycle(n), m)) < 1e-9);
    }
  }
}

TEST_CASE("every corpus graph matches the brute-force oracle") {
  const auto graphs = oracle::corpus();
  REQUIRE(graphs.size() == 200);
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto& g = graphs[k];
    CAPTURE(k);
    const auto net = oracle::to_network(g);
    REQUIRE(net.edge_count() == g.ties());

    const double d = density(net);
    CHECK(std::abs(d - oracle::density(g)) < kTol);
    const double n = static_cast<double>(g.n);
    const double tie_count = d * n * (n - 1.0) / (g.directed ? 1.0 : 2.0);
    CHECK(tie_count == doctest::Approx(static_cast<double>(g.ties())).epsilon(1e-14));
    CHECK(average_degree(net) == 2.0 * static_cast<double>(g.ties()) / n);

    for (bool respect : {false, true}) {
      const double expected = oracle::average_path_length(g, respect);
      if (expected < 0) {
        CHECK(throws_degenerate([&] { average_path_length(net, respect); }));
      } else {
        CHECK(std::abs(average_path_length(net, respect) - expected) < kTol);
      }
    }

    const auto deg = centrality_scores(net, CentralityMeasure::degree);
    const auto btw = centrality_scores(net, CentralityMeasure::betweenness);
    const auto clo = centrality_scores(net, CentralityMeasure::closeness);
    for (std::size_t v = 0; v < g.n; ++v) {
      CHECK(std::abs(deg[v] - oracle::degree_centrality(g, v)) < kTol);
      CHECK(std::abs(btw[v] - oracle::betweenness_centrality(g, v)) < kTol);
      CHECK(std::abs(clo[v] - oracle::closeness_centrality(g, v)) < kTol);
      for (double x : {deg[v], btw[v], clo[v]}) CHECK((x >= 0.0 && x <= 1.0));
    }

    std::vector<double> eig;
    if (g.ties() == 0) {
      CHECK(throws_degenerate([&] { centrality_scores(net, CentralityMeasure::eigenvector); }));
    } else {
      eig = centrality_scores(net, CentralityMeasure::eigenvector);
      const auto expected = oracle::eigenvector_centrality(g);
      for (std::size_t v = 0; v < g.n; ++v) {
        CHECK(std::abs(eig[v] - expected[v]) < kTol);
        CHECK((eig[v] >= 0.0 && eig[v] <= 1.0));
      }
    }

    if (g.n < 3) {
      CHECK(throws_degenerate([&] { clustering_coefficient(net); }));
      CHECK(throws_degenerate([&] { centralization(net, CentralityMeasure::degree); }));
      continue;
    }
    CHECK(std::abs(clustering_coefficient(net) - oracle::clustering(g)) < kTol);

    const auto oracle_scores = [&](CentralityMeasure m) {
      std::vector<double> s(g.n);
      for (std::size_t v = 0; v < g.n; ++v) {
        switch (m) {
          case CentralityMeasure::degree: s[v] = oracle::degree_centrality(g, v); break;
          case CentralityMeasure::betweenness: s[v] = oracle::betweenness_centrality(g, v); break;
          case CentralityMeasure::closeness: s[v] = oracle::closeness_centrality(g, v); break;
          case CentralityMeasure::eigenvector: break;
        }
      }
      if (m == CentralityMeasure::eigenvector) s = oracle::eigenvector_centrality(g);
      return s;
    };
    // Star sums recomputed from an explicit star through the oracle.
    oracle::SmallGraph st{g.n, false, std::vector<std::vector<int>>(g.n, std::vector<int>(g.n))};
    for (std::size_t i = 1; i < g.n; ++i) st.a[0][i] = st.a[i][0] = 1;
    for (auto m : kAllCentralities) {
      if (m == CentralityMeasure::eigenvector && g.ties() == 0) continue;
      CAPTURE(to_string(m));
      std::vector<double> star_scores(g.n);
      for (std::size_t v = 0; v < g.n; ++v) {
        switch (m) {
          case CentralityMeasure::degree: star_scores[v] = oracle::degree_centrality(st, v); break;
          case CentralityMeasure::betweenness:
            star_scores[v] = oracle::betweenness_centrality(st, v);
            break;
          case CentralityMeasure::closeness:
            star_scores[v] = oracle::closeness_centrality(st, v);
            break;
          case CentralityMeasure::eigenvector: break;
        }
      }
      if (m == CentralityMeasure::eigenvector) star_scores = oracle::eigenvector_centrality(st);
      double star_sum = 0;
      for (double x : star_scores) star_sum += star_scores[0] - x;
      const double expected = oracle::centralization(oracle_scores(m), star_sum);
      const double got = centralization(net, m);
      CHECK(std::abs(got - expected) < kTol);
      CHECK((got >= 0.0 && got <= 1.0));
    }
  }
}

TEST_CASE("degenerate inputs") {
  const Network one(Layer::coauthorship, false, {"a"}, {}, DuplicatePolicy::accumulate);
  CHECK(throws_degenerate([&] { density(one); }));
  CHECK(throws_degenerate([&] { clustering_coefficient(undirected(2, {{0, 1}})); }));
  CHECK(throws_degenerate([&] { average_path_length(undirected(3, {}), false); }));
}

TEST_CASE("metrics report keys") {
  const auto report = compute_metrics(complete(4));
  const std::string expected =
      "key,value\nnodes,4\nties,6\ndensity,1\navg_degree,3\nclustering,1\navg_path_length,1\n"
      "centralization_degree,0\ncentralization_betweenness,0\ncentralization_closeness,0\n"
      "centralization_eigenvector,0\n";
  CHECK(report.to_csv() == expected);
  CHECK(report.to_json().find("\"centralization_eigenvector\": 0") != std::string::npos);
}

TEST_CASE("directed layers keep direction for paths only") {
  // directed 3-cycle: hops 1 and 2 along the cycle, all 1 once symmetrized
  const Network net(Layer::trust, true, {"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}},
                    DuplicatePolicy::collapse);
  const auto r = compute_metrics(net);
  CHECK(r.avg_path_length == 1.5);
  CHECK(average_path_length(net, false) == 1.0);
  CHECK(r.density == 0.5);
  CHECK(r.avg_degree == 2.0);
}
