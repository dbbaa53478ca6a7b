#include "collabnet/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include <json.hpp>

#include "collabnet/error.hpp"
#include "collabnet/geo.hpp"
#include "collabnet/random.hpp"

namespace collabnet {

namespace {

// Independent streams so adding a draw in one stage never shifts another.
enum Stream : std::uint64_t { kAttributes = 1, kLocations = 2, kTies = 3 };

std::string node_id(std::size_t i, std::size_t n) {
  const int width = n <= 1 ? 1 : static_cast<int>(std::to_string(n - 1).size());
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "r%0*zu", width, i);
  return buffer;
}

void set_attribute(Researcher& r, const std::string& name, const std::string& value) {
  if (name == "gender") {
    r.gender = value;
  } else if (name == "education") {
    r.education = parse_education(value);
    if (!r.education) throw Error(ErrorCode::spec, "education level '" + value + "' is not valid");
  } else if (name == "discipline") {
    r.discipline = value;
  } else if (name == "employer") {
    r.employer = value;
  } else if (name == "country_origin") {
    r.country_origin = value;
  } else if (name == "country_residence") {
    r.country_residence = value;
  } else if (name == "race_ethnicity") {
    r.race_ethnicity = value;
  } else {
    throw Error(ErrorCode::spec, "unknown attribute '" + name + "' in generator spec");
  }
}

std::vector<double> weights_or_equal(const std::vector<double>& weights, std::size_t count,
                                     const std::string& what) {
  if (weights.empty()) return std::vector<double>(count, 1.0);
  if (weights.size() != count) {
    throw Error(ErrorCode::spec, what + ": weight count does not match level count");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::spec, what + ": negative weight");
  }
  return weights;
}

Location around(Rng& rng, const Location& center, double spread_km) {
  const double bearing = 2.0 * std::numbers::pi * rng.uniform();
  double u = rng.uniform();
  while (u <= 0.0) u = rng.uniform();
  const double distance = spread_km * std::sqrt(-2.0 * std::log(u));
  return destination(center, bearing, distance);
}

struct Placement {
  std::vector<std::optional<Location>> location;
  std::vector<std::size_t> cluster;  // city cluster per node, city_clusters only
};

Placement draw_locations(const LocationModel& model, std::size_t n,
                         const std::vector<std::size_t>* group, Rng& rng) {
  Placement placement;
  auto& out = placement.location;
  out.resize(n);
  switch (model.kind) {
    case LocationModel::Kind::none:
      break;
    case LocationModel::Kind::fixed:
      if (model.fixed.size() != n) {
        throw Error(ErrorCode::spec, "fixed location list must have one entry per node");
      }
      for (std::size_t i = 0; i < n; ++i) out[i] = model.fixed[i];
      break;
    case LocationModel::Kind::uniform_box:
      if (!(model.lat_min <= model.lat_max) || !(model.lon_min <= model.lon_max) ||
          !is_valid({model.lat_min, model.lon_min}) || !is_valid({model.lat_max, model.lon_max})) {
        throw Error(ErrorCode::spec, "invalid latitude/longitude box");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double lat = rng.uniform(model.lat_min, model.lat_max);
        const double lon = rng.uniform(model.lon_min, model.lon_max);
        out[i] = Location{lat, lon};
      }
      break;
    case LocationModel::Kind::city_clusters: {
      if (model.centers.empty()) throw Error(ErrorCode::spec, "city cluster model without centers");
      if (!(model.spread_km >= 0.0)) throw Error(ErrorCode::spec, "cluster spread must be >= 0");
      const auto weights =
          weights_or_equal(model.center_weights, model.centers.size(), "city clusters");
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        if (group) {
          c = (*group)[i];
          if (c >= model.centers.size()) {
            throw Error(ErrorCode::spec, "need one city center per community");
          }
        } else {
          c = rng.categorical(weights);
        }
        out[i] = around(rng, model.centers[c], model.spread_km);
        placement.cluster.push_back(c);
      }
      if (!model.center_countries.empty() &&
          model.center_countries.size() != model.centers.size()) {
        throw Error(ErrorCode::spec, "need one country per city center");
      }
      break;
    }
  }
  return placement;
}

}  // namespace

DyadicSample generate_dyadic_network(const DyadicSpec& spec) {
  if (spec.nodes < 2) throw Error(ErrorCode::spec, "generator needs at least 2 nodes");
  if (spec.beta.empty() || spec.beta.front().first != kInterceptName) {
    throw Error(ErrorCode::spec, "beta must start with the intercept");
  }
  std::vector<std::string> covariates;
  for (std::size_t k = 1; k < spec.beta.size(); ++k) {
    const auto& name = spec.beta[k].first;
    if (name == kDistanceCovariate) {
      if (spec.locations.kind == LocationModel::Kind::none) {
        throw Error(ErrorCode::spec, "distance coefficient requires a location model");
      }
    } else {
      const AttributeDistribution* dist = nullptr;
      for (const auto& a : spec.attributes) {
        if (a.attribute == name) dist = &a;
      }
      if (!dist) throw Error(ErrorCode::spec, "covariate '" + name + "' has no distribution");
      const auto w = weights_or_equal(dist->weights, dist->levels.size(), name);
      std::size_t positive = 0;
      for (double x : w) positive += x > 0.0;
      if (positive < 2) {
        throw Error(ErrorCode::spec,
                    "covariate '" + name + "' needs at least two levels with positive weight");
      }
    }
    covariates.push_back(name);
  }

  std::vector<Researcher> people(spec.nodes);
  Rng attr_rng(spec.seed, kAttributes);
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    people[i].id = node_id(i, spec.nodes);
    for (const auto& dist : spec.attributes) {
      if (dist.levels.empty()) throw Error(ErrorCode::spec, dist.attribute + ": no levels");
      const auto w = weights_or_equal(dist.weights, dist.levels.size(), dist.attribute);
      set_attribute(people[i], dist.attribute, dist.levels[attr_rng.categorical(w)]);
    }
  }
  Rng loc_rng(spec.seed, kLocations);
  const auto placement = draw_locations(spec.locations, spec.nodes, nullptr, loc_rng);
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    people[i].location = placement.location[i];
    if (!spec.locations.center_countries.empty()) {
      people[i].country_residence = spec.locations.center_countries[placement.cluster[i]];
    }
  }

  DyadicSample sample;
  sample.roster = Roster(std::move(people));
  std::vector<std::string> ids;
  for (const auto& r : sample.roster) ids.push_back(r.id);

  const auto ordering =
      layer_is_directed(spec.layer) ? DyadOrdering::ordered : DyadOrdering::unordered;
  const auto empty = Network::for_layer(spec.layer, ids, {});
  sample.table = build_dyads(empty, sample.roster, covariates, ordering, spec.distance_scale_km);

  Rng tie_rng(spec.seed, kTies);
  std::vector<Edge> edges;
  for (auto& row : sample.table.rows) {
    double eta = spec.beta[0].second;
    for (std::size_t c = 0; c < covariates.size(); ++c) eta += spec.beta[c + 1].second * row.covariates[c];
    row.outcome = tie_rng.bernoulli(logistic(eta)) ? 1 : 0;
    if (row.outcome) edges.push_back({row.i, row.j, 1.0});
  }
  sample.network = Network::for_layer(spec.layer, std::move(ids), std::move(edges));
  return sample;
}

PlantedSample generate_planted_partition(const PlantedSpec& spec) {
  if (spec.sizes.size() != spec.communities) {
    throw Error(ErrorCode::spec, "sizes list has " + std::to_string(spec.sizes.size()) +
                                     " entries for " + std::to_string(spec.communities) +
                                     " communities");
  }
  if (!(spec.p_out >= 0.0 && spec.p_out < spec.p_in && spec.p_in <= 1.0)) {
    throw Error(ErrorCode::spec, "planted partition needs 0 <= p_out < p_in <= 1");
  }
  if (!spec.countries.empty() && spec.countries.size() != spec.communities) {
    throw Error(ErrorCode::spec, "need one country per community");
  }
  std::size_t n = 0;
  for (auto s : spec.sizes) {
    if (s == 0) throw Error(ErrorCode::spec, "community sizes must be positive");
    n += s;
  }

  std::vector<std::size_t> group;
  for (std::size_t c = 0; c < spec.sizes.size(); ++c) group.insert(group.end(), spec.sizes[c], c);

  Rng loc_rng(spec.seed, kLocations);
  const bool by_group = spec.locations.kind == LocationModel::Kind::city_clusters;
  const auto locations =
      draw_locations(spec.locations, n, by_group ? &group : nullptr, loc_rng).location;

  std::vector<Researcher> people(n);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    people[i].id = ids[i] = node_id(i, n);
    people[i].location = locations[i];
    people[i].country_residence =
        spec.countries.empty() ? "C" + std::to_string(group[i]) : spec.countries[group[i]];
  }

  Rng tie_rng(spec.seed, kTies);
  std::vector<Edge> edges;
  const bool directed = layer_is_directed(spec.layer);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (!directed && j < i)) continue;
      const double p = group[i] == group[j] ? spec.p_in : spec.p_out;
      if (tie_rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }

  PlantedSample sample;
  sample.roster = Roster(std::move(people));
  sample.network = Network::for_layer(spec.layer, ids, std::move(edges));
  sample.truth = Partition::from_labels(std::move(ids), group);
  sample.truth.modularity = modularity(sample.network, sample.truth);
  return sample;
}

namespace {

using json = nlohmann::json;

Location location_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  return {j.at("lat").get<double>(), j.at("lon").get<double>()};
}

LocationModel locations_from_json(const json& j) {
  LocationModel m;
  if (j.is_null()) return m;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "none") {
    m.kind = LocationModel::Kind::none;
  } else if (kind == "fixed") {
    m.kind = LocationModel::Kind::fixed;
    for (const auto& p : j.at("points")) m.fixed.push_back(location_from_json(p));
  } else if (kind == "uniform_box") {
    m.kind = LocationModel::Kind::uniform_box;
    m.lat_min = j.at("lat_min").get<double>();
    m.lat_max = j.at("lat_max").get<double>();
    m.lon_min = j.at("lon_min").get<double>();
    m.lon_max = j.at("lon_max").get<double>();
  } else if (kind == "city_clusters") {
    m.kind = LocationModel::Kind::city_clusters;
    for (const auto& p : j.at("centers")) m.centers.push_back(location_from_json(p));
    m.center_weights = j.value("weights", std::vector<double>{});
    m.spread_km = j.value("spread_km", 50.0);
    m.center_countries = j.value("countries", std::vector<std::string>{});
  } else {
    throw Error(ErrorCode::spec, "unknown location model '" + kind + "'");
  }
  return m;
}

template <typename F>
auto parse_spec(const std::string& text, F&& body) {
  try {
    return body(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::spec, std::string("generator spec: ") + e.what());
  }
}

}  // namespace

DyadicSpec dyadic_spec_from_json(const std::string& text) {
  return parse_spec(text, [](const json& j) {
    DyadicSpec spec;
    spec.nodes = j.value("nodes", spec.nodes);
    if (j.contains("layer")) spec.layer = parse_layer(j.at("layer").get<std::string>());
    if (j.contains("locations")) spec.locations = locations_from_json(j.at("locations"));
    for (const auto& a : j.value("attributes", json::array())) {
      AttributeDistribution d;
      d.attribute = a.at("attribute").get<std::string>();
      d.levels = a.at("levels").get<std::vector<std::string>>();
      d.weights = a.value("weights", std::vector<double>{});
      spec.attributes.push_back(std::move(d));
    }
    for (const auto& b : j.at("beta")) {
      spec.beta.emplace_back(b.at(0).get<std::string>(), b.at(1).get<double>());
    }
    spec.distance_scale_km = j.value("distance_scale_km", spec.distance_scale_km);
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
  });
}

PlantedSpec planted_spec_from_json(const std::string& text) {
  return parse_spec(text, [](const json& j) {
    PlantedSpec spec;
    spec.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    spec.communities = j.value("communities", spec.sizes.size());
    spec.p_in = j.at("p_in").get<double>();
    spec.p_out = j.at("p_out").get<double>();
    if (j.contains("layer")) spec.layer = parse_layer(j.at("layer").get<std::string>());
    if (j.contains("locations")) spec.locations = locations_from_json(j.at("locations"));
    spec.countries = j.value("countries", std::vector<std::string>{});
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
  });
}

std::string to_json(const DyadicSpec& spec) {
  json j;
  j["nodes"] = spec.nodes;
  j["layer"] = std::string(to_string(spec.layer));
  const auto& m = spec.locations;
  json loc;
  const auto point = [](const Location& p) { return json::array({p.latitude, p.longitude}); };
  switch (m.kind) {
    case LocationModel::Kind::none:
      loc["kind"] = "none";
      break;
    case LocationModel::Kind::fixed:
      loc["kind"] = "fixed";
      loc["points"] = json::array();
      for (const auto& p : m.fixed) loc["points"].push_back(point(p));
      break;
    case LocationModel::Kind::uniform_box:
      loc = {{"kind", "uniform_box"}, {"lat_min", m.lat_min}, {"lat_max", m.lat_max},
             {"lon_min", m.lon_min}, {"lon_max", m.lon_max}};
      break;
    case LocationModel::Kind::city_clusters:
      loc["kind"] = "city_clusters";
      loc["centers"] = json::array();
      for (const auto& p : m.centers) loc["centers"].push_back(point(p));
      loc["weights"] = m.center_weights;
      loc["spread_km"] = m.spread_km;
      loc["countries"] = m.center_countries;
      break;
  }
  j["locations"] = loc;
  j["attributes"] = json::array();
  for (const auto& a : spec.attributes) {
    j["attributes"].push_back({{"attribute", a.attribute}, {"levels", a.levels}, {"weights", a.weights}});
  }
  j["beta"] = json::array();
  for (const auto& [name, value] : spec.beta) j["beta"].push_back(json::array({name, value}));
  j["distance_scale_km"] = spec.distance_scale_km;
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

DyadicSpec demo_spec() {
  DyadicSpec spec;
  spec.nodes = 48;
  spec.layer = Layer::information;
  spec.locations.kind = LocationModel::Kind::city_clusters;
  // Gainesville, Accra, Dakar, Niamey
  spec.locations.centers = {{29.65, -82.32}, {5.60, -0.19}, {14.72, -17.47}, {13.51, 2.11}};
  spec.locations.center_weights = {2.0, 1.0, 1.0, 1.0};
  spec.locations.spread_km = 40.0;
  spec.locations.center_countries = {"US", "GH", "SN", "NE"};
  spec.attributes = {
      {"gender", {"female", "male"}, {}},
      {"education", {"bachelor", "masters", "doctorate"}, {1.0, 2.0, 4.0}},
      {"discipline", {"economics", "geography", "agronomy", "sociology"}, {}},
      {"employer", {"UF", "UG", "UCAD", "UAM"}, {2.0, 1.0, 1.0, 1.0}},
      {"country_origin", {"US", "GH", "SN", "NE", "ML"}, {2.0, 1.0, 1.0, 1.0, 0.5}},
  };
  spec.beta = {{kInterceptName, 0.4},  {kDistanceCovariate, -0.04}, {"education", -0.5},
               {"employer", -1.0},     {"gender", -0.1},            {"discipline", -0.45}};
  spec.distance_scale_km = kDefaultDistanceScaleKm;
  spec.seed = 20221006;
  return spec;
}

}  // namespace collabnet
