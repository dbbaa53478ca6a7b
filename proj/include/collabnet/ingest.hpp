#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "collabnet/model.hpp"

namespace collabnet {

struct DroppedRow {
  std::size_t line;
  std::string reason;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::vector<DroppedRow> dropped;
  std::vector<std::string> unknown_ids;                // sorted, unique
  std::map<std::string, std::size_t> missing_values;   // attribute -> count
  std::size_t self_loops_dropped = 0;

  std::size_t rows_dropped() const { return dropped.size(); }
  std::string to_json() const;
};

struct AuthorshipRecord {
  std::string paper_id;
  std::string author_id;

  friend auto operator<=>(const AuthorshipRecord&, const AuthorshipRecord&) = default;
};

template <typename T>
struct Loaded {
  T value;
  IngestReport report;
};

Loaded<Roster> load_roster(const std::string& path, char delimiter = ',');
Roster parse_roster(std::string_view text, char delimiter, IngestReport* report);

// Nodes are the roster ids in roster order. With a null roster the nodes are
// the distinct endpoints, sorted. An optional `layer` column filters rows.
Loaded<Network> load_edge_list(const std::string& path, Layer layer, const Roster* roster,
                               char delimiter = ',');
Network parse_edge_list(std::string_view text, Layer layer, const Roster* roster, char delimiter,
                        IngestReport* report);

// Square matrix whose first row and column hold the ids. Cell (i,j) > 0 means
// a tie i->j; the diagonal is ignored. Co-authorship matrices must be
// symmetric and are read from the upper triangle.
Network load_adjacency_matrix(const std::string& path, Layer layer, const Roster* roster,
                              char delimiter = ',');
Network parse_adjacency_matrix(std::string_view text, Layer layer, const Roster* roster,
                               char delimiter);

// (paper_id, author_id) rows, de-duplicated and sorted.
Loaded<std::vector<AuthorshipRecord>> load_authorship(const std::string& path,
                                                     char delimiter = ',');

// Co-authorship layer: one node per distinct author (sorted), edge weight =
// number of distinct papers the pair shares. Solo authors stay isolated.
Network project_bipartite(const std::vector<AuthorshipRecord>& records);

// Canonical re-emit, rows sorted by id.
std::string write_roster_csv(const Roster& roster, char delimiter = ',');
std::string write_edges_csv(const Network& net, char delimiter = ',');
std::string write_authorship_csv(std::vector<AuthorshipRecord> records, char delimiter = ',');
std::string write_adjacency_csv(const Network& net, char delimiter = ',');

}  // namespace collabnet
