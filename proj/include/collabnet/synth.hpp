#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "collabnet/communities.hpp"
#include "collabnet/model.hpp"
#include "collabnet/regression.hpp"

namespace collabnet {

struct LocationModel {
  enum class Kind { none, fixed, uniform_box, city_clusters };
  Kind kind = Kind::none;
  std::vector<Location> fixed;  // one per node
  double lat_min = -10.0, lat_max = 10.0;
  double lon_min = -10.0, lon_max = 10.0;
  std::vector<Location> centers;  // city clusters
  std::vector<double> center_weights;  // empty = equal
  double spread_km = 50.0;             // per-axis Gaussian spread around a center
  // When set, a node's country_residence is the country of its city cluster.
  std::vector<std::string> center_countries;
};

struct AttributeDistribution {
  std::string attribute;
  std::vector<std::string> levels;
  std::vector<double> weights;  // empty = equal
};

struct DyadicSpec {
  std::size_t nodes = 60;
  Layer layer = Layer::information;  // directed layers give ordered dyads
  LocationModel locations;
  std::vector<AttributeDistribution> attributes;
  // Intercept first, then covariates by name ("distance" or attributes).
  std::vector<std::pair<std::string, double>> beta;
  double distance_scale_km = kDefaultDistanceScaleKm;
  std::uint64_t seed = 0;
};

struct DyadicSample {
  Roster roster;
  Network network;
  DyadTable table;  // outcomes as drawn
};

// Every dyad is tied independently with probability logistic(x'beta).
// Throws Error(spec) for inconsistent specs, e.g. a covariate in beta whose
// attribute has fewer than two levels with positive weight.
DyadicSample generate_dyadic_network(const DyadicSpec& spec);

struct PlantedSpec {
  std::size_t communities = 2;
  std::vector<std::size_t> sizes;
  double p_in = 0.9;
  double p_out = 0.05;
  Layer layer = Layer::coauthorship;
  // city_clusters: one center per community and members sit around their
  // own center; uniform_box: locations ignore membership.
  LocationModel locations;
  std::vector<std::string> countries;  // per community; default "C<k>"
  std::uint64_t seed = 0;
};

struct PlantedSample {
  Roster roster;
  Network network;
  Partition truth;
};

PlantedSample generate_planted_partition(const PlantedSpec& spec);

DyadicSpec dyadic_spec_from_json(const std::string& text);
PlantedSpec planted_spec_from_json(const std::string& text);
// Inverse of dyadic_spec_from_json.
std::string to_json(const DyadicSpec& spec);

// Fixed-seed specification behind the bundled demo dataset.
DyadicSpec demo_spec();

}  // namespace collabnet
