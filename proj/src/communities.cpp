#include "collabnet/communities.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"

namespace collabnet {

Partition Partition::from_labels(std::vector<std::string> node_ids,
                                 const std::vector<std::size_t>& labels) {
  if (labels.size() != node_ids.size()) {
    throw Error(ErrorCode::shape, "partition labels do not match node count");
  }
  Partition p;
  p.node_ids = std::move(node_ids);
  p.assignment.resize(labels.size());
  std::unordered_map<std::size_t, std::size_t> dense;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, inserted] = dense.emplace(labels[i], dense.size());
    p.assignment[i] = it->second;
  }
  return p;
}

std::size_t Partition::community_count() const {
  std::size_t count = 0;
  for (auto c : assignment) count = std::max(count, c + 1);
  return count;
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out(community_count(), 0);
  for (auto c : assignment) ++out[c];
  return out;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(community_count());
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
  return out;
}

std::string Partition::to_csv() const {
  std::string out;
  csv::append_row(out, {"id", "community"});
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    csv::append_row(out, {node_ids[i], std::to_string(assignment[i])});
  }
  return out;
}

std::string Partition::merges_csv() const {
  std::string out;
  csv::append_row(out, {"step", "left", "right", "merged", "delta_sigma"});
  for (std::size_t s = 0; s < merges.size(); ++s) {
    const auto& m = merges[s];
    csv::append_row(out, {std::to_string(s), std::to_string(m.left), std::to_string(m.right),
                          std::to_string(m.merged), csv::format_number(m.delta_sigma)});
  }
  return out;
}

Partition load_partition(const std::string& path, char delimiter) {
  const auto table = csv::read_file(path, delimiter);
  const auto id_col = table.column("id");
  const auto comm_col = table.column("community");
  if (!id_col || !comm_col) {
    throw Error(ErrorCode::parse, "partition file needs 'id' and 'community' columns");
  }
  std::vector<std::string> ids;
  std::vector<std::size_t> labels;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() <= std::max(*id_col, *comm_col)) {
      throw Error(ErrorCode::parse, "line " + std::to_string(row.line) + ": missing fields");
    }
    const auto label = csv::parse_integer(row.fields[*comm_col]);
    if (!label || *label < 0) {
      throw Error(ErrorCode::parse, "line " + std::to_string(row.line) +
                                        ": community must be a non-negative integer");
    }
    if (!seen.insert(row.fields[*id_col]).second) {
      throw Error(ErrorCode::duplicate_identifier,
                  "node '" + row.fields[*id_col] + "' assigned twice in partition file");
    }
    ids.push_back(row.fields[*id_col]);
    labels.push_back(static_cast<std::size_t>(*label));
  }
  return Partition::from_labels(std::move(ids), labels);
}

namespace {

std::vector<std::size_t> labels_for(const Network& net, const Partition& partition) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < partition.node_ids.size(); ++i) {
    by_id.emplace(partition.node_ids[i], partition.assignment[i]);
  }
  std::vector<std::size_t> labels(net.node_count());
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    const auto it = by_id.find(net.node(i));
    if (it == by_id.end()) {
      throw Error(ErrorCode::identifier, "node '" + net.node(i) + "' is not covered by the partition");
    }
    labels[i] = it->second;
  }
  return labels;
}

double modularity_of_labels(const Network& view, const std::vector<std::size_t>& labels) {
  const double total = view.total_weight();
  if (total <= 0.0) return 0.0;
  std::size_t count = 0;
  for (auto c : labels) count = std::max(count, c + 1);
  std::vector<double> internal(count, 0.0), strength(count, 0.0);
  for (const auto& e : view.edges()) {
    strength[labels[e.src]] += e.weight;
    strength[labels[e.dst]] += e.weight;
    if (labels[e.src] == labels[e.dst]) internal[labels[e.src]] += e.weight;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const double share = strength[c] / (2.0 * total);
    q += internal[c] / total - share * share;
  }
  return q;
}

struct Community {
  std::size_t size = 0;
  std::vector<double> walk;              // averaged P^t row over members
  std::map<std::size_t, double> links;   // neighbouring community -> edge weight between
  double internal = 0.0;
  double strength = 0.0;
  std::vector<std::size_t> nodes;
};

class ComponentMerger {
 public:
  ComponentMerger(const Network& view, const std::vector<std::size_t>& component, int walk_length,
                  std::size_t total_nodes, std::size_t& next_id, double total_weight)
      : view_(view),
        nodes_(component),
        total_nodes_(total_nodes),
        next_id_(next_id),
        total_weight_(total_weight) {
    const std::size_t m = nodes_.size();
    for (std::size_t k = 0; k < m; ++k) local_.emplace(nodes_[k], k);
    inv_strength_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      double s = 0.0;
      for (const auto& nb : view_.out_neighbors(nodes_[k])) s += nb.weight;
      inv_strength_[k] = 1.0 / s;
    }

    for (std::size_t k = 0; k < m; ++k) {
      Community c;
      c.size = 1;
      c.nodes = {nodes_[k]};
      c.walk = walk_from(k, walk_length);
      for (const auto& nb : view_.out_neighbors(nodes_[k])) {
        c.links[nb.node] += nb.weight;
        c.strength += nb.weight;
      }
      communities_.emplace(nodes_[k], std::move(c));
    }
    for (const auto& [id, c] : communities_) {
      for (const auto& [other, w] : c.links) {
        if (id < other) push_candidate(id, other);
      }
    }
  }

  // Runs all merges; returns the merge log and the best cut's communities.
  void run(std::vector<MergeStep>& log, std::vector<std::vector<std::size_t>>& best_cut) {
    double q = current_modularity();
    double best_q = q;
    best_cut = snapshot();
    while (!candidates_.empty()) {
      const auto [ds, a, b] = *candidates_.begin();
      const auto merged = merge(a, b);
      log.push_back({a, b, merged, ds});
      q = current_modularity();
      if (q > best_q) {
        best_q = q;
        best_cut = snapshot();
      }
    }
  }

 private:
  std::vector<double> walk_from(std::size_t start, int steps) const {
    const std::size_t m = nodes_.size();
    std::vector<double> p(m, 0.0), next(m, 0.0);
    p[start] = 1.0;
    for (int t = 0; t < steps; ++t) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t k = 0; k < m; ++k) {
        if (p[k] == 0.0) continue;
        const double mass = p[k] * inv_strength_[k];
        for (const auto& nb : view_.out_neighbors(nodes_[k])) {
          next[local_.at(nb.node)] += mass * nb.weight;
        }
      }
      std::swap(p, next);
    }
    return p;
  }

  double delta_sigma(const Community& a, const Community& b) const {
    double r2 = 0.0;
    for (std::size_t k = 0; k < a.walk.size(); ++k) {
      const double diff = a.walk[k] - b.walk[k];
      r2 += diff * diff * inv_strength_[k];
    }
    const double sa = static_cast<double>(a.size);
    const double sb = static_cast<double>(b.size);
    return (sa * sb / (sa + sb)) * r2 / static_cast<double>(total_nodes_);
  }

  void push_candidate(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    const double ds = delta_sigma(communities_.at(a), communities_.at(b));
    candidates_.emplace(ds, a, b);
    pair_cost_[{a, b}] = ds;
  }

  void drop_candidates_of(std::size_t id) {
    for (const auto& [other, w] : communities_.at(id).links) {
      const auto key = std::minmax(id, other);
      const auto it = pair_cost_.find({key.first, key.second});
      if (it == pair_cost_.end()) continue;
      candidates_.erase({it->second, key.first, key.second});
      pair_cost_.erase(it);
    }
  }

  std::size_t merge(std::size_t a, std::size_t b) {
    drop_candidates_of(a);
    drop_candidates_of(b);
    auto ca = std::move(communities_.at(a));
    auto cb = std::move(communities_.at(b));
    communities_.erase(a);
    communities_.erase(b);

    Community c;
    c.size = ca.size + cb.size;
    c.walk.resize(ca.walk.size());
    const double wa = static_cast<double>(ca.size) / static_cast<double>(c.size);
    const double wb = static_cast<double>(cb.size) / static_cast<double>(c.size);
    for (std::size_t k = 0; k < c.walk.size(); ++k) c.walk[k] = wa * ca.walk[k] + wb * cb.walk[k];
    const double between = ca.links.count(b) ? ca.links.at(b) : 0.0;
    c.internal = ca.internal + cb.internal + between;
    c.strength = ca.strength + cb.strength;
    c.nodes = std::move(ca.nodes);
    c.nodes.insert(c.nodes.end(), cb.nodes.begin(), cb.nodes.end());
    for (const auto* src : {&ca.links, &cb.links}) {
      for (const auto& [other, w] : *src) {
        if (other != a && other != b) c.links[other] += w;
      }
    }

    const std::size_t id = next_id_++;
    for (const auto& [other, w] : c.links) {
      auto& links = communities_.at(other).links;
      links.erase(a);
      links.erase(b);
      links[id] = w;
    }
    communities_.emplace(id, std::move(c));
    for (const auto& [other, w] : communities_.at(id).links) push_candidate(id, other);
    return id;
  }

  // This component's share of the global modularity.
  double current_modularity() const {
    double q = 0.0;
    for (const auto& [id, c] : communities_) {
      const double share = c.strength / (2.0 * total_weight_);
      q += c.internal / total_weight_ - share * share;
    }
    return q;
  }

  std::vector<std::vector<std::size_t>> snapshot() const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& [id, c] : communities_) {
      auto members = c.nodes;
      std::sort(members.begin(), members.end());
      out.push_back(std::move(members));
    }
    return out;
  }

  const Network& view_;
  std::vector<std::size_t> nodes_;
  std::unordered_map<std::size_t, std::size_t> local_;
  std::vector<double> inv_strength_;
  std::size_t total_nodes_;
  std::size_t& next_id_;
  double total_weight_;
  std::map<std::size_t, Community> communities_;
  std::set<std::tuple<double, std::size_t, std::size_t>> candidates_;
  std::map<std::pair<std::size_t, std::size_t>, double> pair_cost_;
};

}  // namespace

Partition walktrap(const Network& net, int walk_length) {
  if (walk_length < 1) throw Error(ErrorCode::config, "walk length must be at least 1");
  if (net.node_count() == 0) throw Error(ErrorCode::degenerate_input, "walktrap on an empty network");

  const auto view = undirected_view(net);
  const std::size_t n = view.node_count();
  const double total_weight = view.total_weight();
  std::vector<std::size_t> label(n, 0);
  std::vector<MergeStep> merges;
  std::size_t next_id = n;

  for (const auto& component : component_indices(view)) {
    if (component.size() == 1) {
      label[component[0]] = component[0];
      continue;
    }
    std::vector<std::vector<std::size_t>> best;
    ComponentMerger merger(view, component, walk_length, n, next_id, total_weight);
    merger.run(merges, best);
    for (const auto& members : best) {
      for (auto i : members) label[i] = members.front();
    }
  }

  // Dense numbering by the smallest member keeps indices independent of
  // merge ids.
  auto partition = Partition::from_labels(view.nodes(), label);
  partition.walk_length = walk_length;
  partition.merges = std::move(merges);
  partition.modularity = modularity_of_labels(view, partition.assignment);
  return partition;
}

double modularity(const Network& net, const Partition& partition) {
  return modularity_of_labels(undirected_view(net), labels_for(net, partition));
}

CommunitySummary community_summary(const Partition& partition) {
  CommunitySummary s;
  const auto sizes = partition.sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    s.rows.push_back({c, sizes[c]});
    if (sizes[c] == 1) ++s.singletons;
  }
  std::stable_sort(s.rows.begin(), s.rows.end(),
                   [](const auto& a, const auto& b) { return a.size > b.size; });
  if (!s.rows.empty() && !partition.assignment.empty()) {
    s.largest_share = static_cast<double>(s.rows.front().size) /
                      static_cast<double>(partition.assignment.size());
  }
  return s;
}

std::string CommunitySummary::to_csv() const {
  std::string out;
  csv::append_row(out, {"community", "size"});
  for (const auto& r : rows) csv::append_row(out, {std::to_string(r.community), std::to_string(r.size)});
  return out;
}

}  // namespace collabnet
