#include "collabnet/homophily.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/random.hpp"

namespace collabnet {

namespace {

struct Coded {
  std::vector<int> label;  // -1 for missing
  int groups = 0;
};

Coded code_attribute(const Network& net, const Roster& roster, const std::string& attribute) {
  if (!is_attribute_name(attribute)) {
    throw Error(ErrorCode::identifier, "unknown attribute '" + attribute + "'");
  }
  std::map<std::string, int> codes;
  std::vector<std::optional<std::string>> raw(net.node_count());
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    if (const auto* r = roster.find(net.node(i))) raw[i] = attribute_value(*r, attribute);
    if (raw[i]) codes.emplace(*raw[i], 0);
  }
  int next = 0;
  for (auto& [value, code] : codes) code = next++;
  Coded out;
  out.groups = next;
  out.label.resize(net.node_count(), -1);
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    if (raw[i]) out.label[i] = codes.at(*raw[i]);
  }
  return out;
}

struct Counts {
  std::size_t external = 0, internal = 0, excluded = 0;
};

Counts count_ties(const Network& net, const std::vector<int>& label) {
  Counts c;
  for (const auto& e : net.edges()) {
    const int a = label[e.src];
    const int b = label[e.dst];
    if (a < 0 || b < 0) {
      ++c.excluded;
    } else if (a == b) {
      ++c.internal;
    } else {
      ++c.external;
    }
  }
  return c;
}

double ei_value(const Counts& c) {
  const double e = static_cast<double>(c.external);
  const double i = static_cast<double>(c.internal);
  return (e - i) / (e + i);
}

// Number of distinct arrangements of a multiset, saturating above the limit.
std::size_t arrangement_count(std::vector<int> labels) {
  std::map<int, std::size_t> sizes;
  for (int l : labels) ++sizes[l];
  // Multiply binomials C(total, k) incrementally; each partial product is an
  // integer.
  double count = 1.0;
  std::size_t placed = 0;
  for (const auto& [label, k] : sizes) {
    for (std::size_t j = 1; j <= k; ++j) {
      count = count * static_cast<double>(placed + j) / static_cast<double>(j);
    }
    placed += k;
    if (count > static_cast<double>(kExhaustiveLimit)) return kExhaustiveLimit + 1;
  }
  return static_cast<std::size_t>(std::llround(count));
}

}  // namespace

EIReport ei_index(const Network& net, const Roster& roster, const std::string& attribute) {
  const auto coded = code_attribute(net, roster, attribute);
  const auto counts = count_ties(net, coded.label);
  if (counts.external + counts.internal == 0) {
    throw Error(ErrorCode::degenerate_input,
                "E-I index for '" + attribute + "': no tie has both endpoint values known");
  }
  EIReport r;
  r.layer = std::string(to_string(net.layer()));
  r.attribute = attribute;
  r.ties_external = counts.external;
  r.ties_internal = counts.internal;
  r.excluded_ties = counts.excluded;
  r.ei_raw = ei_value(counts);
  return r;
}

EIReport ei_normalized(const Network& net, const Roster& roster, const std::string& attribute,
                       std::size_t permutations, std::uint64_t seed) {
  if (permutations < 1) throw Error(ErrorCode::config, "permutations must be at least 1");
  auto report = ei_index(net, roster, attribute);
  report.seed = seed;
  const auto coded = code_attribute(net, roster, attribute);

  std::vector<std::size_t> known;
  std::vector<int> values;
  for (std::size_t i = 0; i < coded.label.size(); ++i) {
    if (coded.label[i] >= 0) {
      known.push_back(i);
      values.push_back(coded.label[i]);
    }
  }

  auto evaluate = [&](const std::vector<int>& arrangement) {
    auto label = coded.label;
    for (std::size_t k = 0; k < known.size(); ++k) label[known[k]] = arrangement[k];
    return ei_value(count_ties(net, label));
  };

  std::vector<double> samples;
  const auto distinct = arrangement_count(values);
  if (distinct <= kExhaustiveLimit) {
    report.exhaustive = true;
    std::sort(values.begin(), values.end());
    samples.reserve(distinct);
    do {
      samples.push_back(evaluate(values));
    } while (std::next_permutation(values.begin(), values.end()));
  } else {
    samples.resize(permutations);
    parallel_for(permutations, [&](std::size_t rep) {
      Rng rng(seed, rep);
      auto shuffled = values;
      rng.shuffle(std::span<int>(shuffled));
      samples[rep] = evaluate(shuffled);
    });
  }

  report.permutations = samples.size();
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(samples.size());
  report.ei_expected_mean = mean;
  report.ei_expected_sd = std::sqrt(var);
  // Exhaustive moments of an invariant statistic can carry rounding noise.
  const bool flat = report.ei_expected_sd <= 1e-12 * std::max(1.0, std::abs(mean));
  report.ei_normalized = flat ? 0.0 : (report.ei_raw - mean) / report.ei_expected_sd;
  if (flat) report.ei_expected_sd = 0.0;
  return report;
}

std::string ei_reports_csv(const std::vector<EIReport>& reports) {
  using csv::format_number;
  std::string out;
  csv::append_row(out, {"layer", "attribute", "ties_external", "ties_internal", "excluded_ties",
                        "ei_raw", "ei_expected_mean", "ei_expected_sd", "ei_normalized",
                        "permutations", "exhaustive", "seed"});
  for (const auto& r : reports) {
    csv::append_row(out, {r.layer, r.attribute, std::to_string(r.ties_external),
                          std::to_string(r.ties_internal), std::to_string(r.excluded_ties),
                          format_number(r.ei_raw), format_number(r.ei_expected_mean),
                          format_number(r.ei_expected_sd), format_number(r.ei_normalized),
                          std::to_string(r.permutations), r.exhaustive ? "true" : "false",
                          std::to_string(r.seed)});
  }
  return out;
}

}  // namespace collabnet
