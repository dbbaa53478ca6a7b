#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "collabnet/error.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/permtest.hpp"
#include "collabnet/synth.hpp"
#include "oracles.hpp"

using namespace collabnet;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::config;
}

struct Person {
  std::string id;
  std::optional<Location> where;
  std::optional<std::string> country;
};

Roster make_roster(const std::vector<Person>& people) {
  std::vector<Researcher> rs;
  for (const auto& p : people) {
    Researcher r;
    r.id = p.id;
    r.location = p.where;
    r.country_residence = p.country;
    rs.push_back(r);
  }
  return Roster(std::move(rs));
}

// Degrees of longitude spanning `km` along the equator.
double equator_degrees(double km) { return km / oracle::kEarthRadiusKm * 180.0 / std::numbers::pi; }

// Pooled intra-community mean distance by nested loops over node pairs.
double oracle_pooled_distance(const std::vector<std::size_t>& labels,
                              const std::vector<Location>& where) {
  double sum = 0, pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] != labels[j]) continue;
      sum += oracle::chord_distance_km(where[i].latitude, where[i].longitude, where[j].latitude,
                                       where[j].longitude);
      pairs += 1;
    }
  }
  return sum / pairs;
}

// Type-7 sample quantile: h = (N - 1) q, interpolate between order statistics.
double oracle_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const double below = std::floor(h);
  const double above = std::ceil(h);
  return v[static_cast<std::size_t>(below)] +
         (h - below) * (v[static_cast<std::size_t>(above)] - v[static_cast<std::size_t>(below)]);
}

}  // namespace

TEST_CASE("mean intra-community distance examples") {
  const Location origin{0.0, 0.0};
  const auto co = make_roster({{"a", origin, {}}, {"b", origin, {}}});
  const auto two = Partition::from_labels({"a", "b"}, {0, 0});
  CHECK(stat_mean_intra_distance(two, co).value == 0.0);

  const auto r = make_roster({{"A", origin, {}},
                              {"B", origin, {}},
                              {"C", origin, {}},
                              {"D", Location{0.0, equator_degrees(100.0)}, {}}});
  const auto p = Partition::from_labels({"A", "B", "C", "D"}, {0, 0, 1, 1});
  const auto v = stat_mean_intra_distance(p, r);
  CHECK(v.value == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(v.pairs_used == 2);
  CHECK(stat_mean_intra_distance(p, r, DistancePooling::per_community).value ==
        doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("pooled and per-community means differ as expected") {
  // {A,B,C} all co-located (3 pairs at 0 km) and {D,E} 90 km apart.
  const Location o{0.0, 0.0};
  const auto r = make_roster({{"A", o, {}},
                              {"B", o, {}},
                              {"C", o, {}},
                              {"D", o, {}},
                              {"E", Location{0.0, equator_degrees(90.0)}, {}}});
  const auto p = Partition::from_labels({"A", "B", "C", "D", "E"}, {0, 0, 0, 1, 1});
  CHECK(stat_mean_intra_distance(p, r).value == doctest::Approx(90.0 / 4.0).epsilon(1e-12));
  CHECK(stat_mean_intra_distance(p, r, DistancePooling::per_community).value ==
        doctest::Approx(45.0).epsilon(1e-12));
}

TEST_CASE("missing locations are dropped and counted") {
  const Location o{0.0, 0.0};
  const auto r = make_roster({{"a", o, {}}, {"b", o, {}}, {"c", std::nullopt, {}}});
  const auto v = stat_mean_intra_distance(Partition::from_labels({"a", "b", "c"}, {0, 0, 0}), r);
  CHECK(v.pairs_used == 1);
  CHECK(v.pairs_dropped == 2);

  const auto none = make_roster({{"a", o, {}}, {"b", std::nullopt, {}}, {"c", o, {}}});
  CHECK(code_of([&] {
          stat_mean_intra_distance(Partition::from_labels({"a", "b", "c"}, {0, 0, 1}), none);
        }) == ErrorCode::degenerate_input);
  CHECK(code_of([&] {
          stat_mean_intra_distance(Partition::from_labels({"a", "b", "c"}, {0, 1, 2}), r);
        }) == ErrorCode::degenerate_input);
}

TEST_CASE("same-country share") {
  const auto us = make_roster({{"a", {}, "US"}, {"b", {}, "US"}, {"c", {}, "US"}});
  CHECK(stat_same_country_share(Partition::from_labels({"a", "b", "c"}, {0, 0, 1}), us).value ==
        1.0);

  const auto mixed = make_roster({{"a", {}, "US"}, {"b", {}, "US"}, {"c", {}, "GH"}});
  CHECK(stat_same_country_share(Partition::from_labels({"a", "b", "c"}, {0, 0, 0}), mixed).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto unknown = make_roster({{"a", {}, "US"}, {"b", {}, std::nullopt}});
  CHECK(code_of([&] {
          stat_same_country_share(Partition::from_labels({"a", "b"}, {0, 0}), unknown);
        }) == ErrorCode::degenerate_input);
}

TEST_CASE("planted communities: statistics match nested-loop counts") {
  PlantedSpec spec;
  spec.communities = 3;
  spec.sizes = {6, 5, 4};
  spec.p_in = 0.8;
  spec.p_out = 0.1;
  spec.locations.kind = LocationModel::Kind::city_clusters;
  spec.locations.centers = {{10, 10}, {40, -60}, {-20, 120}};
  spec.locations.spread_km = 300;
  spec.countries = {"US", "US", "GH"};
  spec.seed = 5;
  const auto sample = generate_planted_partition(spec);
  const auto& truth = sample.truth;

  std::vector<Location> where;
  std::vector<std::string> country;
  for (const auto& id : truth.node_ids) {
    where.push_back(*sample.roster.at(id).location);
    country.push_back(*sample.roster.at(id).country_residence);
  }
  CHECK(stat_mean_intra_distance(truth, sample.roster).value ==
        doctest::Approx(oracle_pooled_distance(truth.assignment, where)).epsilon(1e-10));

  // Same-country share over a partition that mixes the planted groups.
  std::vector<std::size_t> mixed(truth.node_ids.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = i % 4;
  double same = 0, pairs = 0;
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    for (std::size_t j = i + 1; j < mixed.size(); ++j) {
      if (mixed[i] != mixed[j]) continue;
      pairs += 1;
      same += country[i] == country[j];
    }
  }
  const auto p = Partition::from_labels(truth.node_ids, mixed);
  CHECK(stat_same_country_share(p, sample.roster).value == doctest::Approx(same / pairs));
}

TEST_CASE("constant statistic gives a degenerate interval and p = 1") {
  const Location o{12.0, 34.0};
  std::vector<Person> people;
  std::vector<std::string> ids;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 9; ++i) {
    people.push_back({"n" + std::to_string(i), o, {}});
    ids.push_back("n" + std::to_string(i));
    labels.push_back(static_cast<std::size_t>(i % 3));
  }
  const auto r = permutation_test(Partition::from_labels(ids, labels), make_roster(people),
                                  {.replicates = 200, .seed = 1});
  CHECK(r.observed == 0.0);
  CHECK(r.interval_low == 0.0);
  CHECK(r.interval_high == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK(r.permuted_sd == 0.0);
  const auto h = r.histogram(30);
  CHECK(h.counts.size() == 1);
  CHECK(h.counts[0] == 200);
}

TEST_CASE("every replicate value is attainable by some size-preserving relabeling") {
  const std::vector<Location> where{{0, 0}, {1, 2}, {5, -3}, {-8, 4}, {20, 20}};
  std::vector<Person> people;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < where.size(); ++i) {
    ids.push_back("p" + std::to_string(i));
    people.push_back({ids.back(), where[i], {}});
  }
  const std::vector<std::size_t> labels{0, 0, 0, 1, 1};
  const auto partition = Partition::from_labels(ids, labels);

  std::vector<double> attainable;
  auto perm = labels;
  std::sort(perm.begin(), perm.end());
  do {
    attainable.push_back(oracle_pooled_distance(perm, where));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(attainable.size() == 10);

  const auto r = permutation_test(partition, make_roster(people), {.replicates = 300, .seed = 9});
  REQUIRE(r.permuted.size() == 300);
  std::set<std::size_t> hit;
  for (double v : r.permuted) {
    std::size_t match = attainable.size();
    for (std::size_t k = 0; k < attainable.size(); ++k) {
      if (std::abs(attainable[k] - v) <= 1e-9 * std::max(1.0, v)) match = k;
    }
    REQUIRE(match < attainable.size());
    hit.insert(match);
  }
  CHECK(hit.size() == attainable.size());
  CHECK(r.communities_used == 2);
}

TEST_CASE("summary quantities recomputed from the replicates") {
  PlantedSpec spec;
  spec.sizes = {8, 8, 8};
  spec.communities = 3;
  spec.locations.kind = LocationModel::Kind::city_clusters;
  spec.locations.centers = {{0, 0}, {10, 30}, {-30, 60}};
  spec.locations.spread_km = 800;
  spec.seed = 21;
  const auto sample = generate_planted_partition(spec);

  for (auto alt : {Alternative::less, Alternative::greater}) {
    const auto r = permutation_test(sample.truth, sample.roster,
                                    {.replicates = 499, .seed = 3, .alternative = alt});
    double mean = 0;
    for (double v : r.permuted) mean += v;
    mean /= 499.0;
    double ss = 0;
    for (double v : r.permuted) ss += (v - mean) * (v - mean);
    CHECK(r.permuted_mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r.permuted_sd == doctest::Approx(std::sqrt(ss / 498.0)).epsilon(1e-12));
    CHECK(r.interval_low == doctest::Approx(oracle_quantile(r.permuted, 0.025)).epsilon(1e-14));
    CHECK(r.interval_high == doctest::Approx(oracle_quantile(r.permuted, 0.975)).epsilon(1e-14));
    CHECK(r.interval_low <= r.interval_high);

    std::size_t extreme = 0;
    for (double v : r.permuted) {
      extreme += alt == Alternative::less ? (v <= r.observed) : (v >= r.observed);
    }
    CHECK(r.p_value == static_cast<double>(extreme + 1) / 500.0);
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);

    const auto h = r.histogram(30);
    CHECK(h.edges.size() == h.counts.size() + 1);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == 499);
    CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
    CHECK(h.edges.front() <= std::min(r.observed, *std::min_element(r.permuted.begin(),
                                                                    r.permuted.end())));
  }

  // Geographically planted communities sit far below the permuted range.
  const auto r = permutation_test(sample.truth, sample.roster, {.replicates = 499, .seed = 3});
  CHECK(r.observed < r.interval_low);
  CHECK(r.p_value < 0.05);
}

TEST_CASE("quantile") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({5}, 0.975) == 5.0);
  CHECK(quantile({0, 10}, 0.025) == doctest::Approx(0.25));
  CHECK(code_of([] { quantile({}, 0.5); }) == ErrorCode::degenerate_input);
}

TEST_CASE("replicates do not depend on the thread count") {
  PlantedSpec spec;
  spec.sizes = {10, 10, 10};
  spec.communities = 3;
  spec.locations.kind = LocationModel::Kind::city_clusters;
  spec.locations.centers = {{0, 0}, {10, 30}, {-30, 60}};
  spec.seed = 2;
  const auto sample = generate_planted_partition(spec);
  const PermTestOptions options{.replicates = 1000, .seed = 42};
  set_thread_count(1);
  const auto one = permutation_test(sample.truth, sample.roster, options);
  set_thread_count(4);
  const auto four = permutation_test(sample.truth, sample.roster, options);
  set_thread_count(0);
  CHECK(one.permuted == four.permuted);
  CHECK(one.summary_csv() == four.summary_csv());
  CHECK(one.histogram_csv(30) == four.histogram_csv(30));
  const auto other = permutation_test(sample.truth, sample.roster, {.replicates = 1000, .seed = 43});
  CHECK(other.permuted != one.permuted);
}

TEST_CASE("option errors") {
  const auto r = make_roster({{"a", Location{}, {}}, {"b", Location{}, {}}});
  const auto p = Partition::from_labels({"a", "b"}, {0, 0});
  CHECK(code_of([&] { permutation_test(p, r, {.replicates = 0}); }) == ErrorCode::config);
  CHECK(code_of([] { parse_statistic("median"); }) == ErrorCode::config);
  CHECK(parse_statistic("country") == Statistic::same_country_share);
  CHECK(code_of([] { parse_alternative("two-sided"); }) == ErrorCode::config);
}

TEST_CASE("output schemas") {
  const auto r = make_roster({{"a", Location{0, 0}, {}}, {"b", Location{0, 1}, {}},
                              {"c", Location{0, 2}, {}}, {"d", Location{0, 3}, {}}});
  const auto res = permutation_test(Partition::from_labels({"a", "b", "c", "d"}, {0, 0, 1, 1}), r,
                                    {.replicates = 20, .seed = 4});
  const auto summary = res.summary_csv();
  CHECK(summary.rfind("statistic,observed,replicates,permuted_mean,permuted_sd,interval_low,"
                      "interval_high,p_value,alternative,seed,communities_used\n",
                      0) == 0);
  CHECK(res.histogram_csv(5).rfind("bin_low,bin_high,count,observed,interval_low,interval_high\n",
                                   0) == 0);
}
