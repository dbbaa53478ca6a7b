#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collabnet/model.hpp"

namespace collabnet {

struct EIReport {
  std::string layer;
  std::string attribute;
  std::size_t ties_external = 0;
  std::size_t ties_internal = 0;
  std::size_t excluded_ties = 0;  // an endpoint has no value for the attribute
  double ei_raw = 0.0;
  double ei_expected_mean = 0.0;
  double ei_expected_sd = 0.0;
  double ei_normalized = 0.0;
  std::size_t permutations = 0;  // replicates actually evaluated
  bool exhaustive = false;
  std::uint64_t seed = 0;
};

// Assignments at or below this count are enumerated instead of sampled.
inline constexpr std::size_t kExhaustiveLimit = 100'000;

// Raw (E - I) / (E + I). Directed ties count individually. Network nodes are
// looked up in the roster by id; nodes absent from it have no value.
EIReport ei_index(const Network& net, const Roster& roster, const std::string& attribute);

// Adds permutation moments: known labels are shuffled across the nodes that
// carry a value (group sizes fixed, ties fixed). When the number of distinct
// assignments is at most kExhaustiveLimit every assignment is evaluated once
// and `permutations` is ignored. ei_normalized = (raw - mean) / sd, 0 if sd = 0.
EIReport ei_normalized(const Network& net, const Roster& roster, const std::string& attribute,
                       std::size_t permutations, std::uint64_t seed);

// One row per report with every EIReport field.
std::string ei_reports_csv(const std::vector<EIReport>& reports);

}  // namespace collabnet
