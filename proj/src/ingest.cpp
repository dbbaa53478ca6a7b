#include "collabnet/ingest.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <json.hpp>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"

namespace collabnet {

namespace {

const std::vector<std::string> kRosterColumns = {
    "id",         "label",          "gender",            "education",
    "discipline", "employer",       "country_origin",    "country_residence",
    "race_ethnicity", "lat",        "lon",
};

std::string cell(const csv::Row& row, std::optional<std::size_t> column) {
  if (!column || *column >= row.fields.size()) return {};
  return row.fields[*column];
}

std::optional<std::string> optional_cell(const csv::Row& row, std::optional<std::size_t> column) {
  auto value = cell(row, column);
  if (value.empty()) return std::nullopt;
  return value;
}

void finish_unknown(IngestReport& report, std::set<std::string>& unknown) {
  report.unknown_ids.assign(unknown.begin(), unknown.end());
}

}  // namespace

std::string IngestReport::to_json() const {
  nlohmann::ordered_json j;
  j["rows_read"] = rows_read;
  j["rows_kept"] = rows_kept;
  j["rows_dropped"] = rows_dropped();
  auto& drops = j["dropped"] = nlohmann::ordered_json::array();
  for (const auto& d : dropped) drops.push_back({{"line", d.line}, {"reason", d.reason}});
  j["unknown_ids"] = unknown_ids;
  j["missing_values"] = nlohmann::ordered_json::object();
  for (const auto& [name, count] : missing_values) j["missing_values"][name] = count;
  j["self_loops_dropped"] = self_loops_dropped;
  return j.dump(2) + "\n";
}

Roster parse_roster(std::string_view text, char delimiter, IngestReport* report_out) {
  IngestReport report;
  const auto table = csv::parse(text, delimiter);
  const auto id_col = table.column("id");
  if (!id_col) throw Error(ErrorCode::parse, "roster header has no 'id' column");

  const auto label_col = table.column("label");
  const auto lat_col = table.column("lat");
  const auto lon_col = table.column("lon");
  std::map<std::string, std::optional<std::size_t>> attr_cols;
  for (const auto& name : attribute_names()) {
    attr_cols[name] = table.column(name);
    report.missing_values[name] = 0;
  }
  report.missing_values["location"] = 0;

  std::vector<Researcher> people;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    ++report.rows_read;
    Researcher r;
    r.id = cell(row, id_col);
    if (r.id.empty()) {
      report.dropped.push_back({row.line, "empty id"});
      continue;
    }
    if (!seen.insert(r.id).second) {
      throw Error(ErrorCode::duplicate_identifier,
                  "duplicate researcher id '" + r.id + "' at line " + std::to_string(row.line));
    }
    r.label = cell(row, label_col);
    r.gender = optional_cell(row, attr_cols["gender"]);
    r.discipline = optional_cell(row, attr_cols["discipline"]);
    r.employer = optional_cell(row, attr_cols["employer"]);
    r.country_origin = optional_cell(row, attr_cols["country_origin"]);
    r.country_residence = optional_cell(row, attr_cols["country_residence"]);
    r.race_ethnicity = optional_cell(row, attr_cols["race_ethnicity"]);
    if (auto edu = optional_cell(row, attr_cols["education"])) {
      r.education = parse_education(*edu);
      if (!r.education) {
        throw Error(ErrorCode::parse, "line " + std::to_string(row.line) + ": education '" + *edu +
                                          "' is not one of high_school, bachelor, masters, "
                                          "doctorate");
      }
    }

    const auto lat_text = cell(row, lat_col);
    const auto lon_text = cell(row, lon_col);
    if (!lat_text.empty() || !lon_text.empty()) {
      const auto lat = csv::parse_number(lat_text);
      const auto lon = csv::parse_number(lon_text);
      if (!lat || !lon || !is_valid(Location{*lat, *lon})) {
        report.dropped.push_back(
            {row.line, "malformed coordinates for '" + r.id + "': '" + lat_text + "','" +
                           lon_text + "'"});
        continue;
      }
      r.location = Location{*lat, *lon};
    }

    for (const auto& name : attribute_names()) {
      if (!attribute_value(r, name)) ++report.missing_values[name];
    }
    if (!r.location) ++report.missing_values["location"];
    people.push_back(std::move(r));
    ++report.rows_kept;
  }

  if (report_out) *report_out = std::move(report);
  return Roster(std::move(people));
}

Loaded<Roster> load_roster(const std::string& path, char delimiter) {
  Loaded<Roster> out;
  out.value = parse_roster(csv::read_text(path), delimiter, &out.report);
  return out;
}

Network parse_edge_list(std::string_view text, Layer layer, const Roster* roster, char delimiter,
                        IngestReport* report_out) {
  IngestReport report;
  const auto table = csv::parse(text, delimiter);
  const auto src_col = table.column("src");
  const auto dst_col = table.column("dst");
  if (!src_col || !dst_col) {
    throw Error(ErrorCode::parse, "edge list header must contain 'src' and 'dst' columns");
  }
  const auto weight_col = table.column("weight");
  const auto layer_col = table.column("layer");

  struct Pending {
    std::string src, dst;
    double weight;
  };
  std::vector<Pending> pending;
  std::set<std::string> unknown;
  for (const auto& row : table.rows) {
    ++report.rows_read;
    const auto row_layer = cell(row, layer_col);
    if (!row_layer.empty()) {
      Layer parsed;
      try {
        parsed = parse_layer(row_layer);
      } catch (const Error&) {
        report.dropped.push_back({row.line, "unknown layer '" + row_layer + "'"});
        continue;
      }
      if (parsed != layer) {
        report.dropped.push_back({row.line, "layer " + row_layer + " not selected"});
        continue;
      }
    }
    auto src = cell(row, src_col);
    auto dst = cell(row, dst_col);
    if (src.empty() || dst.empty()) {
      report.dropped.push_back({row.line, "empty endpoint"});
      continue;
    }
    double weight = 1.0;
    if (const auto text = cell(row, weight_col); !text.empty()) {
      const auto parsed = csv::parse_number(text);
      if (!parsed || *parsed <= 0.0) {
        report.dropped.push_back({row.line, "non-positive or malformed weight '" + text + "'"});
        continue;
      }
      weight = *parsed;
    }
    if (roster) {
      bool ok = true;
      for (const auto* id : {&src, &dst}) {
        if (!roster->contains(*id)) {
          unknown.insert(*id);
          ok = false;
        }
      }
      if (!ok) {
        report.dropped.push_back({row.line, "unknown id in edge " + src + "->" + dst});
        continue;
      }
    }
    if (src == dst) {
      report.dropped.push_back({row.line, "self-loop on " + src});
      ++report.self_loops_dropped;
      continue;
    }
    pending.push_back({std::move(src), std::move(dst), weight});
    ++report.rows_kept;
  }
  finish_unknown(report, unknown);

  std::vector<std::string> nodes;
  if (roster) {
    for (const auto& r : *roster) nodes.push_back(r.id);
  } else {
    std::set<std::string> ids;
    for (const auto& p : pending) {
      ids.insert(p.src);
      ids.insert(p.dst);
    }
    nodes.assign(ids.begin(), ids.end());
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

  std::vector<Edge> edges;
  edges.reserve(pending.size());
  for (const auto& p : pending) edges.push_back({index.at(p.src), index.at(p.dst), p.weight});

  if (report_out) *report_out = std::move(report);
  return Network::for_layer(layer, std::move(nodes), std::move(edges));
}

Loaded<Network> load_edge_list(const std::string& path, Layer layer, const Roster* roster,
                               char delimiter) {
  Loaded<Network> out;
  out.value = parse_edge_list(csv::read_text(path), layer, roster, delimiter, &out.report);
  return out;
}

Network parse_adjacency_matrix(std::string_view text, Layer layer, const Roster* roster,
                               char delimiter) {
  const auto table = csv::parse(text, delimiter);
  if (table.header.empty()) throw Error(ErrorCode::shape, "adjacency matrix is empty");
  const std::vector<std::string> col_ids(table.header.begin() + 1, table.header.end());
  const std::size_t n = col_ids.size();
  if (table.rows.size() != n) {
    throw Error(ErrorCode::shape, "adjacency matrix is not square: " +
                                      std::to_string(table.rows.size()) + " rows, " +
                                      std::to_string(n) + " columns");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    if (row.fields.size() != n + 1) {
      throw Error(ErrorCode::shape, "adjacency row at line " + std::to_string(row.line) +
                                        " has " + std::to_string(row.fields.size()) +
                                        " fields, expected " + std::to_string(n + 1));
    }
    if (row.fields[0] != col_ids[i]) {
      throw Error(ErrorCode::identifier, "adjacency row id '" + row.fields[0] +
                                             "' does not match column id '" + col_ids[i] + "'");
    }
  }

  std::vector<std::string> nodes;
  if (roster) {
    std::set<std::string> matrix_ids(col_ids.begin(), col_ids.end());
    for (const auto& id : col_ids) {
      if (!roster->contains(id)) {
        throw Error(ErrorCode::identifier, "adjacency id '" + id + "' is not in the roster");
      }
    }
    for (const auto& r : *roster) {
      if (!matrix_ids.count(r.id)) {
        throw Error(ErrorCode::identifier, "roster id '" + r.id + "' missing from adjacency matrix");
      }
      nodes.push_back(r.id);
    }
  } else {
    nodes = col_ids;
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

  std::vector<std::vector<double>> values(n, std::vector<double>(n, 0.0));
  const bool integer_weights = layer == Layer::coauthorship;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& text = row.fields[j + 1];
      const auto v = csv::parse_integer(text.empty() ? "0" : text);
      const bool ok = v && *v >= 0 && (integer_weights || *v <= 1);
      if (!ok) {
        throw Error(ErrorCode::parse, "line " + std::to_string(row.line) + ": adjacency entry '" +
                                          text + "' must be " +
                                          (integer_weights ? "a non-negative integer" : "0 or 1"));
      }
      values[i][j] = static_cast<double>(*v);
    }
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || values[i][j] == 0.0) continue;
      if (integer_weights) {
        if (values[i][j] != values[j][i]) {
          throw Error(ErrorCode::shape, "co-authorship matrix is not symmetric at (" + col_ids[i] +
                                            "," + col_ids[j] + ")");
        }
        if (j < i) continue;
      }
      edges.push_back({index.at(col_ids[i]), index.at(col_ids[j]), values[i][j]});
    }
  }
  return Network::for_layer(layer, std::move(nodes), std::move(edges));
}

Network load_adjacency_matrix(const std::string& path, Layer layer, const Roster* roster,
                              char delimiter) {
  return parse_adjacency_matrix(csv::read_text(path), layer, roster, delimiter);
}

Loaded<std::vector<AuthorshipRecord>> load_authorship(const std::string& path, char delimiter) {
  Loaded<std::vector<AuthorshipRecord>> out;
  auto& report = out.report;
  const auto table = csv::read_file(path, delimiter);
  const auto paper_col = table.column("paper_id");
  const auto author_col = table.column("author_id");
  if (!paper_col || !author_col) {
    throw Error(ErrorCode::parse, "authorship header must contain 'paper_id' and 'author_id'");
  }
  std::set<AuthorshipRecord> records;
  for (const auto& row : table.rows) {
    ++report.rows_read;
    AuthorshipRecord rec{cell(row, paper_col), cell(row, author_col)};
    if (rec.paper_id.empty() || rec.author_id.empty()) {
      report.dropped.push_back({row.line, "empty paper_id or author_id"});
      continue;
    }
    if (!records.insert(std::move(rec)).second) {
      report.dropped.push_back({row.line, "duplicate authorship record"});
      continue;
    }
    ++report.rows_kept;
  }
  out.value.assign(records.begin(), records.end());
  return out;
}

Network project_bipartite(const std::vector<AuthorshipRecord>& records) {
  std::map<std::string, std::set<std::string>> authors_by_paper;
  std::set<std::string> authors;
  for (const auto& rec : records) {
    authors_by_paper[rec.paper_id].insert(rec.author_id);
    authors.insert(rec.author_id);
  }
  std::vector<std::string> nodes(authors.begin(), authors.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

  // One unit-weight edge per (paper, author pair); the network accumulates.
  std::vector<Edge> edges;
  for (const auto& [paper, members] : authors_by_paper) {
    const std::vector<std::string> list(members.begin(), members.end());
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        edges.push_back({index.at(list[a]), index.at(list[b]), 1.0});
      }
    }
  }
  return Network::for_layer(Layer::coauthorship, std::move(nodes), std::move(edges));
}

std::string write_roster_csv(const Roster& roster, char delimiter) {
  std::vector<const Researcher*> sorted;
  for (const auto& r : roster) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::string out;
  csv::append_row(out, kRosterColumns, delimiter);
  for (const auto* r : sorted) {
    auto opt = [](const std::optional<std::string>& v) { return v.value_or(""); };
    csv::append_row(out,
                    {r->id, r->label, opt(r->gender),
                     r->education ? std::string(to_string(*r->education)) : "",
                     opt(r->discipline), opt(r->employer), opt(r->country_origin),
                     opt(r->country_residence), opt(r->race_ethnicity),
                     r->location ? csv::format_number(r->location->latitude) : "",
                     r->location ? csv::format_number(r->location->longitude) : ""},
                    delimiter);
  }
  return out;
}

std::string write_edges_csv(const Network& net, char delimiter) {
  std::vector<std::array<std::string, 3>> rows;
  for (const auto& e : net.edges()) {
    std::string a = net.node(e.src);
    std::string b = net.node(e.dst);
    if (!net.directed() && b < a) std::swap(a, b);
    rows.push_back({a, b, csv::format_number(e.weight)});
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  csv::append_row(out, {"src", "dst", "weight", "layer"}, delimiter);
  const std::string layer(to_string(net.layer()));
  for (const auto& r : rows) csv::append_row(out, {r[0], r[1], r[2], layer}, delimiter);
  return out;
}

std::string write_authorship_csv(std::vector<AuthorshipRecord> records, char delimiter) {
  std::sort(records.begin(), records.end());
  records.erase(std::unique(records.begin(), records.end()), records.end());
  std::string out;
  csv::append_row(out, {"paper_id", "author_id"}, delimiter);
  for (const auto& r : records) csv::append_row(out, {r.paper_id, r.author_id}, delimiter);
  return out;
}

std::string write_adjacency_csv(const Network& net, char delimiter) {
  std::vector<std::size_t> order(net.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return net.node(a) < net.node(b); });
  std::string out;
  std::vector<std::string> header{"id"};
  for (auto i : order) header.push_back(net.node(i));
  csv::append_row(out, header, delimiter);
  for (auto i : order) {
    std::vector<std::string> row{net.node(i)};
    for (auto j : order) {
      double w = 0.0;
      for (const auto& nb : net.out_neighbors(i)) {
        if (nb.node == j) w = nb.weight;
      }
      row.push_back(csv::format_number(w));
    }
    csv::append_row(out, row, delimiter);
  }
  return out;
}

}  // namespace collabnet
