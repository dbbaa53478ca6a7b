#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace collabnet {

enum class Layer { information, trust, coauthorship };

std::string_view to_string(Layer layer);
Layer parse_layer(std::string_view text);

// Survey layers are directed and binary; co-authorship is undirected and
// weighted by the number of joint publications.
constexpr bool layer_is_directed(Layer layer) { return layer != Layer::coauthorship; }

enum class Education { high_school, bachelor, masters, doctorate };

std::string_view to_string(Education level);
std::optional<Education> parse_education(std::string_view text);

struct Location {
  double latitude = 0.0;   // degrees, [-90, 90]
  double longitude = 0.0;  // degrees, [-180, 180]

  friend bool operator==(const Location&, const Location&) = default;
};

bool is_valid(const Location& location);

struct Researcher {
  std::string id;
  std::string label;
  std::optional<std::string> gender;
  std::optional<Education> education;
  std::optional<std::string> discipline;
  std::optional<std::string> employer;
  std::optional<std::string> country_origin;
  std::optional<std::string> country_residence;
  std::optional<std::string> race_ethnicity;
  std::optional<Location> location;

  friend bool operator==(const Researcher&, const Researcher&) = default;
};

// Names accepted wherever an attribute is selected by name.
const std::vector<std::string>& attribute_names();
bool is_attribute_name(std::string_view name);

// Value of a categorical attribute as text; nullopt when missing.
// Throws Error(identifier) for unknown attribute names.
std::optional<std::string> attribute_value(const Researcher& researcher, std::string_view name);

class Roster {
 public:
  Roster() = default;
  // Throws on empty or duplicate ids and out-of-range coordinates.
  explicit Roster(std::vector<Researcher> researchers);

  std::size_t size() const { return researchers_.size(); }
  bool empty() const { return researchers_.empty(); }
  const Researcher& operator[](std::size_t i) const { return researchers_[i]; }
  const Researcher* find(std::string_view id) const;
  const Researcher& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  auto begin() const { return researchers_.begin(); }
  auto end() const { return researchers_.end(); }
  const std::vector<Researcher>& researchers() const { return researchers_; }

 private:
  std::vector<Researcher> researchers_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Edge {
  std::size_t src = 0;
  std::size_t dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  std::size_t node;
  double weight;
};

enum class DuplicatePolicy { collapse, accumulate };

// A layer of ties over a fixed node list. Immutable after construction.
// Edges are canonical: no self-loops, no duplicates, undirected edges stored
// with src < dst, sorted by (src, dst).
class Network {
 public:
  Network() = default;
  Network(Layer layer, bool directed, std::vector<std::string> nodes, std::vector<Edge> edges,
          DuplicatePolicy duplicates);

  // Applies the layer conventions: survey layers directed with unit weights
  // and collapsed duplicates, co-authorship undirected with accumulated weights.
  static Network for_layer(Layer layer, std::vector<std::string> nodes, std::vector<Edge> edges);

  Layer layer() const { return layer_; }
  bool directed() const { return directed_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t dropped_self_loops() const { return dropped_self_loops_; }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  // Throws Error(identifier) for ids outside the node list.
  std::size_t require_index(std::string_view id) const;

  // For undirected networks out and in neighbours coincide.
  std::span<const Neighbor> out_neighbors(std::size_t i) const { return out_[i]; }
  std::span<const Neighbor> in_neighbors(std::size_t i) const { return in_[i]; }

  bool has_edge(std::size_t src, std::size_t dst) const;
  double total_weight() const;

 private:
  Layer layer_ = Layer::information;
  bool directed_ = true;
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> out_;
  std::vector<std::vector<Neighbor>> in_;
  std::size_t dropped_self_loops_ = 0;
};

}  // namespace collabnet
