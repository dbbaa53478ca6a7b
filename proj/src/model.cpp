#include "collabnet/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "collabnet/error.hpp"

namespace collabnet {

namespace {

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::information: return "information";
    case Layer::trust: return "trust";
    case Layer::coauthorship: return "coauthorship";
  }
  return "information";
}

Layer parse_layer(std::string_view text) {
  const auto key = lowercase(text);
  if (key == "information" || key == "info") return Layer::information;
  if (key == "trust") return Layer::trust;
  if (key == "coauthorship" || key == "co-authorship") return Layer::coauthorship;
  throw Error(ErrorCode::config, "unknown layer '" + std::string(text) +
                                     "' (expected information, trust or coauthorship)");
}

std::string_view to_string(Education level) {
  switch (level) {
    case Education::high_school: return "high_school";
    case Education::bachelor: return "bachelor";
    case Education::masters: return "masters";
    case Education::doctorate: return "doctorate";
  }
  return "high_school";
}

std::optional<Education> parse_education(std::string_view text) {
  static const std::map<std::string, Education> levels = {
      {"high_school", Education::high_school}, {"high school", Education::high_school},
      {"highschool", Education::high_school},  {"bachelor", Education::bachelor},
      {"bachelors", Education::bachelor},      {"masters", Education::masters},
      {"master", Education::masters},          {"doctorate", Education::doctorate},
      {"phd", Education::doctorate},
  };
  const auto it = levels.find(lowercase(text));
  if (it == levels.end()) return std::nullopt;
  return it->second;
}

bool is_valid(const Location& location) {
  return std::isfinite(location.latitude) && std::isfinite(location.longitude) &&
         location.latitude >= -90.0 && location.latitude <= 90.0 &&
         location.longitude >= -180.0 && location.longitude <= 180.0;
}

const std::vector<std::string>& attribute_names() {
  static const std::vector<std::string> names = {
      "gender",           "education",         "discipline",    "employer",
      "country_origin",   "country_residence", "race_ethnicity",
  };
  return names;
}

bool is_attribute_name(std::string_view name) {
  const auto& names = attribute_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::optional<std::string> attribute_value(const Researcher& r, std::string_view name) {
  if (name == "gender") return r.gender;
  if (name == "education") {
    if (!r.education) return std::nullopt;
    return std::string(to_string(*r.education));
  }
  if (name == "discipline") return r.discipline;
  if (name == "employer") return r.employer;
  if (name == "country_origin") return r.country_origin;
  if (name == "country_residence") return r.country_residence;
  if (name == "race_ethnicity") return r.race_ethnicity;
  throw Error(ErrorCode::identifier, "unknown attribute '" + std::string(name) + "'");
}

Roster::Roster(std::vector<Researcher> researchers) : researchers_(std::move(researchers)) {
  index_.reserve(researchers_.size());
  for (std::size_t i = 0; i < researchers_.size(); ++i) {
    const auto& r = researchers_[i];
    if (r.id.empty()) throw Error(ErrorCode::identifier, "researcher with empty id");
    if (r.location && !is_valid(*r.location)) {
      throw Error(ErrorCode::parse, "researcher '" + r.id + "' has coordinates out of range");
    }
    if (!index_.emplace(r.id, i).second) {
      throw Error(ErrorCode::duplicate_identifier, "duplicate researcher id '" + r.id + "'");
    }
  }
}

const Researcher* Roster::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &researchers_[it->second];
}

const Researcher& Roster::at(std::string_view id) const {
  if (const auto* r = find(id)) return *r;
  throw Error(ErrorCode::identifier, "unknown researcher id '" + std::string(id) + "'");
}

Network::Network(Layer layer, bool directed, std::vector<std::string> nodes,
                 std::vector<Edge> edges, DuplicatePolicy duplicates)
    : layer_(layer), directed_(directed), nodes_(std::move(nodes)) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) throw Error(ErrorCode::identifier, "network node with empty id");
    if (!index_.emplace(nodes_[i], i).second) {
      throw Error(ErrorCode::duplicate_identifier, "duplicate network node '" + nodes_[i] + "'");
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, double> merged;
  for (auto e : edges) {
    if (e.src >= nodes_.size() || e.dst >= nodes_.size()) {
      throw Error(ErrorCode::identifier, "edge endpoint outside the node list");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::parse, "edge weight must be positive and finite");
    }
    if (e.src == e.dst) {
      ++dropped_self_loops_;
      continue;
    }
    if (!directed_ && e.src > e.dst) std::swap(e.src, e.dst);
    auto [it, inserted] = merged.emplace(std::pair{e.src, e.dst}, e.weight);
    if (!inserted && duplicates == DuplicatePolicy::accumulate) it->second += e.weight;
  }

  edges_.reserve(merged.size());
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  for (const auto& [key, weight] : merged) {
    edges_.push_back({key.first, key.second, weight});
    out_[key.first].push_back({key.second, weight});
    if (directed_) {
      in_[key.second].push_back({key.first, weight});
    } else {
      out_[key.second].push_back({key.first, weight});
    }
  }
  if (!directed_) in_ = out_;
  for (auto& list : out_) {
    std::sort(list.begin(), list.end(), [](auto& a, auto& b) { return a.node < b.node; });
  }
  for (auto& list : in_) {
    std::sort(list.begin(), list.end(), [](auto& a, auto& b) { return a.node < b.node; });
  }
}

Network Network::for_layer(Layer layer, std::vector<std::string> nodes, std::vector<Edge> edges) {
  const bool directed = layer_is_directed(layer);
  if (directed) {
    for (auto& e : edges) e.weight = 1.0;
  }
  return Network(layer, directed, std::move(nodes), std::move(edges),
                 directed ? DuplicatePolicy::collapse : DuplicatePolicy::accumulate);
}

std::optional<std::size_t> Network::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::require_index(std::string_view id) const {
  if (auto i = index_of(id)) return *i;
  throw Error(ErrorCode::identifier, "unknown node id '" + std::string(id) + "'");
}

bool Network::has_edge(std::size_t src, std::size_t dst) const {
  const auto list = out_neighbors(src);
  return std::binary_search(list.begin(), list.end(), Neighbor{dst, 0.0},
                            [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

double Network::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.weight;
  return total;
}

}  // namespace collabnet
