#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "collabnet/communities.hpp"
#include "collabnet/error.hpp"
#include "collabnet/synth.hpp"
#include "oracles.hpp"

using namespace collabnet;

namespace {

using Pairs = std::vector<std::tuple<std::size_t, std::size_t, double>>;

Network weighted(std::size_t n, const Pairs& pairs, std::string prefix = "c") {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  std::vector<Edge> edges;
  for (auto [a, b, w] : pairs) edges.push_back({a, b, w});
  return Network(Layer::coauthorship, false, ids, edges, DuplicatePolicy::accumulate);
}

std::vector<std::vector<double>> dense(const Network& net) {
  std::vector<std::vector<double>> w(net.node_count(), std::vector<double>(net.node_count()));
  for (const auto& e : net.edges()) {
    w[e.src][e.dst] += e.weight;
    w[e.dst][e.src] += e.weight;
  }
  return w;
}

// Partition as a set of member-id sets, independent of community numbering.
std::set<std::set<std::string>> blocks(const Partition& p) {
  std::set<std::set<std::string>> out;
  for (const auto& members : p.members()) {
    std::set<std::string> b;
    for (auto i : members) b.insert(p.node_ids[i]);
    out.insert(b);
  }
  return out;
}

Network barbell() {
  Pairs pairs;
  for (std::size_t base : {0u, 5u}) {
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) pairs.emplace_back(base + i, base + j, 1.0);
    }
  }
  pairs.emplace_back(4, 5, 1.0);
  return weighted(10, pairs);
}

Network random_graph(std::size_t n, double p, std::uint64_t seed, bool random_weights) {
  oracle::Lcg rng(seed);
  Pairs pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.unit() < p) pairs.emplace_back(i, j, random_weights ? 1.0 + 4.0 * rng.unit() : 1.0);
    }
  }
  return weighted(n, pairs);
}

}  // namespace

TEST_CASE("edgeless graphs give singletons") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto p = walktrap(weighted(n, {}));
    CHECK(p.community_count() == n);
    CHECK(p.modularity == 0.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(p.assignment[i] == i);
  }
  CHECK_THROWS_AS(walktrap(weighted(0, {})), Error);
  CHECK_THROWS_AS(walktrap(weighted(3, {{0, 1, 1.0}}), 0), Error);
}

TEST_CASE("two disconnected triangles") {
  const auto net = weighted(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
  const auto p = walktrap(net);
  CHECK(p.community_count() == 2);
  CHECK(p.modularity == 0.5);
  CHECK(modularity(net, p) == 0.5);
  CHECK(blocks(p) == std::set<std::set<std::string>>{{"c0", "c1", "c2"}, {"c3", "c4", "c5"}});
}

TEST_CASE("barbell matches exhaustive modularity maximization") {
  const auto net = barbell();
  const auto w = dense(net);
  // Restricted growth strings enumerate each set partition of 10 nodes once.
  std::vector<std::size_t> label(10, 0), best;
  double best_q = -1.0;
  std::size_t visited = 0;
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == label.size()) {
      ++visited;
      const double q = oracle::modularity(w, label);
      if (q > best_q + 1e-12) {
        best_q = q;
        best = label;
      }
      return;
    }
    for (std::size_t c = 0; c <= used; ++c) {
      label[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(1, 1);
  CHECK(visited == 115975);  // Bell(10)
  const auto optimum = Partition::from_labels(net.nodes(), best);

  const auto p = walktrap(net);
  CHECK(blocks(p) == blocks(optimum));
  CHECK(blocks(p) == std::set<std::set<std::string>>{{"c0", "c1", "c2", "c3", "c4"},
                                                     {"c5", "c6", "c7", "c8", "c9"}});
  CHECK(std::abs(p.modularity - best_q) < 1e-12);
}

TEST_CASE("modularity against the double-sum oracle") {
  oracle::Lcg rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + trial % 20;
    const auto net = random_graph(n, 0.3, 100 + trial, trial % 2 == 0);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = rng.next() % 4;
    const auto p = Partition::from_labels(net.nodes(), labels);
    CHECK(std::abs(modularity(net, p) - oracle::modularity(dense(net), p.assignment)) < 1e-12);
    if (net.edge_count() > 0) {
      const auto one = Partition::from_labels(net.nodes(), std::vector<std::size_t>(n, 7));
      CHECK(std::abs(modularity(net, one)) < 1e-15);
    }
  }
  const auto net = weighted(3, {{0, 1, 1.0}});
  const auto short_p = Partition::from_labels({"c0", "c1"}, {0, 1});
  try {
    modularity(net, short_p);
    FAIL("uncovered node accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::identifier);
  }
}

TEST_CASE("selected cut is the best cut along the merge sequence") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto net = random_graph(18, 0.3, seed, seed % 2 == 1);
    const auto w = dense(net);
    const auto p = walktrap(net);
    // Replay merges on connected graphs only, where one sequence covers all.
    std::vector<std::size_t> owner(net.node_count());
    for (std::size_t i = 0; i < owner.size(); ++i) owner[i] = i;
    if (p.merges.size() + 1 != net.node_count()) continue;
    double best = oracle::modularity(w, owner);
    for (const auto& m : p.merges) {
      for (auto& o : owner) {
        if (o == m.left || o == m.right) o = m.merged;
      }
      best = std::max(best, oracle::modularity(w, owner));
    }
    CHECK(std::abs(p.modularity - best) < 1e-12);
    CHECK(std::abs(p.modularity - modularity(net, p)) < 1e-12);
    for (const auto& m : p.merges) CHECK(m.delta_sigma >= 0.0);
  }
}

TEST_CASE("communities never span components") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto net = random_graph(30, 0.06, seed, false);
    const auto p = walktrap(net);
    const auto d = oracle::distances([&] {
      std::vector<std::vector<int>> a(30, std::vector<int>(30, 0));
      for (const auto& e : net.edges()) a[e.src][e.dst] = a[e.dst][e.src] = 1;
      return a;
    }());
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t j = 0; j < 30; ++j) {
        if (p.assignment[i] == p.assignment[j]) CHECK(d[i][j] >= 0);
      }
    }
  }
}

TEST_CASE("relabeling nodes does not change the communities") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 24;
    const auto net = random_graph(n, 0.25, seed, true);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = (i * 7 + 3) % n;
    Pairs relabeled;
    for (const auto& e : net.edges()) relabeled.emplace_back(perm[e.src], perm[e.dst], e.weight);
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[perm[i]] = net.node(i);
    std::vector<Edge> edges;
    for (auto [a, b, wgt] : relabeled) edges.push_back({a, b, wgt});
    const Network other(Layer::coauthorship, false, ids, edges, DuplicatePolicy::accumulate);
    CHECK(blocks(walktrap(net)) == blocks(walktrap(other)));
  }
}

TEST_CASE("planted partitions are recovered") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    PlantedSpec spec;
    spec.communities = 2;
    spec.sizes = {10, 10};
    spec.p_in = 0.9;
    spec.p_out = 0.05;
    spec.seed = seed;
    const auto sample = generate_planted_partition(spec);
    CHECK(blocks(walktrap(sample.network)) == blocks(sample.truth));
  }
}

TEST_CASE("summary") {
  const auto three = Partition::from_labels({"a", "b", "c"}, {5, 9, 2});
  const auto s3 = community_summary(three);
  CHECK(s3.rows.size() == 3);
  CHECK(s3.singletons == 3);
  for (const auto& r : s3.rows) CHECK(r.size == 1);

  const auto p = Partition::from_labels({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"},
                                        {0, 0, 0, 0, 1, 1, 1, 1, 1, 1});
  const auto s = community_summary(p);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].community == 1);
  CHECK(s.rows[0].size == 6);
  CHECK(s.rows[1].community == 0);
  CHECK(s.rows[1].size == 4);
  CHECK(s.singletons == 0);
  CHECK(s.largest_share == 0.6);
  CHECK(s.to_csv() == "community,size\n1,6\n0,4\n");

  std::vector<std::size_t> labels(391);
  for (std::size_t i = 0; i < 391; ++i) labels[i] = i < 58 ? 0 : 1 + i % 200;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < 391; ++i) ids.push_back("r" + std::to_string(i));
  const auto big = community_summary(Partition::from_labels(ids, labels));
  CHECK(big.rows[0].size == 58);
  CHECK(std::round(big.largest_share * 100) == 15);
}

TEST_CASE("labels are renumbered densely by first appearance") {
  const auto p = Partition::from_labels({"a", "b", "c", "d"}, {42, 7, 42, 3});
  CHECK(p.assignment == std::vector<std::size_t>{0, 1, 0, 2});
  CHECK(p.to_csv() == "id,community\na,0\nb,1\nc,0\nd,2\n");
  CHECK(p.sizes() == std::vector<std::size_t>{2, 1, 1});
}
