#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/ingest.hpp"
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

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("collabnet_test_" + name);
  csv::write_text(path.string(), text);
  return path.string();
}

Roster roster_of(std::initializer_list<const char*> ids) {
  std::vector<Researcher> people;
  for (const char* id : ids) people.push_back(Researcher{.id = id});
  return Roster(std::move(people));
}

}  // namespace

TEST_CASE("csv parsing") {
  const auto t = csv::parse("\xEF\xBB\xBF" "a,b,c\r\n1,\"x,y\",\"say \"\"hi\"\"\"\r\n\r\n"
                            " 2 , \"multi\nline\",\n");
  REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields == std::vector<std::string>{"1", "x,y", "say \"hi\""});
  CHECK(t.rows[0].line == 2);
  CHECK(t.rows[1].fields == std::vector<std::string>{"2", "multi\nline", ""});
  CHECK(t.rows[1].line == 4);
  CHECK(t.column("c") == 2u);
  CHECK_FALSE(t.column("d").has_value());

  const auto semi = csv::parse("a;b\n1;2\n", ';');
  CHECK(semi.rows[0].fields == std::vector<std::string>{"1", "2"});

  CHECK(code_of([] { csv::parse("a\n\"open\n"); }) == ErrorCode::parse);
  CHECK(code_of([] { csv::read_file("/nonexistent/collabnet.csv"); }) == ErrorCode::io);
}

TEST_CASE("csv escaping round-trips") {
  std::string out;
  const std::vector<std::string> fields{"plain", "with,comma", "q\"uote", "new\nline", " pad", ""};
  csv::append_row(out, {"h1", "h2", "h3", "h4", "h5", "h6"});
  csv::append_row(out, fields);
  CHECK(csv::parse(out).rows.at(0).fields == fields);
}

TEST_CASE("number formatting round-trips") {
  oracle::Lcg rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = (rng.unit() - 0.5) * std::pow(10.0, static_cast<int>(rng.next() % 40) - 20);
    const auto text = csv::format_number(x);
    REQUIRE(csv::parse_number(text).has_value());
    CHECK(*csv::parse_number(text) == x);
  }
  CHECK(csv::format_number(0.1) == "0.1");
  CHECK(csv::format_number(-0.0) == "0");
  CHECK(csv::format_number(3.0) == "3");
  CHECK_FALSE(csv::parse_number("1.5x").has_value());
  CHECK_FALSE(csv::parse_number("").has_value());
  CHECK(csv::parse_integer(" 42 ") == 42);
  CHECK_FALSE(csv::parse_integer("4.2").has_value());
}

TEST_CASE("roster loading") {
  const auto path = temp_file("roster.csv",
                              "id,gender,education,lat,lon\n"
                              "a,f,doctorate,45.5,-73.6\n"
                              "b,m,masters,-33.9,151.2\n");
  const auto loaded = load_roster(path);
  REQUIRE(loaded.value.size() == 2);
  CHECK(loaded.value.at("a").location == Location{45.5, -73.6});
  CHECK(loaded.value.at("b").education == Education::masters);
  CHECK(loaded.report.rows_read == 2);
  CHECK(loaded.report.rows_kept == 2);
  CHECK(loaded.report.missing_values.at("discipline") == 2);
  CHECK(loaded.report.missing_values.at("location") == 0);

  try {
    parse_roster("id\nx\ny\nx\n", ',', nullptr);
    FAIL("duplicate id accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::duplicate_identifier);
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }

  try {
    parse_roster("id,education\np,kindergarten\n", ',', nullptr);
    FAIL("bad education accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  CHECK(code_of([] { parse_roster("name\nx\n", ',', nullptr); }) == ErrorCode::parse);
  CHECK(code_of([] { load_roster("/nonexistent/roster.csv"); }) == ErrorCode::io);
}

TEST_CASE("roster rows with bad coordinates or empty ids are dropped") {
  IngestReport report;
  const auto roster = parse_roster("id,lat,lon,employer\n"
                                   "a,91,0,u1\n"
                                   "b,abc,2,u1\n"
                                   ",1,1,u2\n"
                                   "c,,,u2\n"
                                   "d,10,,\n"
                                   "e,10,20,\n",
                                   ',', &report);
  CHECK(roster.size() == 2);
  CHECK(roster.contains("c"));
  CHECK(roster.contains("e"));
  CHECK(report.rows_read == 6);
  CHECK(report.rows_kept == 2);
  CHECK(report.rows_dropped() == 4);
  CHECK(report.rows_read == report.rows_kept + report.rows_dropped());
  CHECK(report.missing_values.at("location") == 1);
  CHECK(report.missing_values.at("employer") == 1);
  CHECK_FALSE(roster.at("c").gender.has_value());
}

TEST_CASE("twenty-two row roster") {
  std::string text = "id,label,gender,employer\n";
  for (int i = 0; i < 22; ++i) {
    text += "r" + std::to_string(i) + ",Researcher " + std::to_string(i) + "," +
            (i % 2 ? "f" : "m") + ",unit\n";
  }
  IngestReport report;
  CHECK(parse_roster(text, ',', &report).size() == 22);
  CHECK(report.rows_kept == 22);
}

TEST_CASE("edge lists") {
  const auto roster = roster_of({"a", "b", "c"});
  IngestReport report;
  const auto trust = parse_edge_list("src,dst\na,b\nb,a\n", Layer::trust, &roster, ',', &report);
  CHECK(trust.directed());
  CHECK(trust.edge_count() == 2);
  CHECK(trust.node_count() == 3);

  const auto dropped = parse_edge_list("src,dst,weight\na,zzz,1\na,b,0\na,b,-2\nc,c,1\nb,c,x\n"
                                       "a,c,1\n",
                                       Layer::information, &roster, ',', &report);
  CHECK(dropped.edge_count() == 1);
  CHECK(report.unknown_ids == std::vector<std::string>{"zzz"});
  CHECK(report.rows_read == 6);
  CHECK(report.rows_kept == 1);
  CHECK(report.self_loops_dropped == 1);
  CHECK(report.rows_read == report.rows_kept + report.rows_dropped());

  const auto coauth = parse_edge_list("src,dst,weight\nb,a,2\na,b,1.5\n", Layer::coauthorship,
                                      &roster, ',', &report);
  REQUIRE(coauth.edge_count() == 1);
  CHECK_FALSE(coauth.directed());
  CHECK(coauth.edges()[0].weight == 3.5);

  const auto filtered = parse_edge_list("src,dst,layer\na,b,trust\nb,c,information\n",
                                        Layer::trust, &roster, ',', &report);
  CHECK(filtered.edge_count() == 1);
  CHECK(report.rows_dropped() == 1);

  const auto free_nodes =
      parse_edge_list("src,dst\nz,y\ny,x\n", Layer::information, nullptr, ',', nullptr);
  CHECK(free_nodes.nodes() == std::vector<std::string>{"x", "y", "z"});

  CHECK(code_of([&] { parse_edge_list("from,to\na,b\n", Layer::trust, &roster, ',', nullptr); }) ==
        ErrorCode::parse);
  CHECK(code_of([&] { load_edge_list("/nonexistent/edges.csv", Layer::trust, &roster); }) ==
        ErrorCode::io);
}

TEST_CASE("edge list with 254 ties") {
  std::vector<Researcher> people;
  for (int i = 0; i < 40; ++i) people.push_back(Researcher{.id = "s" + std::to_string(i)});
  const Roster roster(std::move(people));
  std::string text = "src,dst\n";
  std::set<std::pair<int, int>> used;
  oracle::Lcg rng(11);
  while (used.size() < 254) {
    const int a = static_cast<int>(rng.next() % 40);
    const int b = static_cast<int>(rng.next() % 40);
    if (a == b || !used.insert({a, b}).second) continue;
    text += "s" + std::to_string(a) + ",s" + std::to_string(b) + "\n";
  }
  const auto path = temp_file("edges254.csv", text);
  const auto loaded = load_edge_list(path, Layer::information, &roster);
  CHECK(loaded.value.edge_count() == 254);
  CHECK(loaded.report.rows_kept == 254);
}

TEST_CASE("adjacency matrices") {
  const auto single = parse_adjacency_matrix("id,a,b,c\na,0,1,0\nb,0,0,0\nc,0,0,0\n",
                                             Layer::trust, nullptr, ',');
  REQUIRE(single.edge_count() == 1);
  CHECK(single.edges()[0] == Edge{0, 1, 1.0});

  std::string zeros = "id,a,b,c,d,e\n";
  for (const char* id : {"a", "b", "c", "d", "e"}) zeros += std::string(id) + ",0,0,0,0,0\n";
  CHECK(parse_adjacency_matrix(zeros, Layer::information, nullptr, ',').edge_count() == 0);

  // Diagonal is ignored.
  CHECK(parse_adjacency_matrix("id,a,b\na,1,0\nb,0,1\n", Layer::trust, nullptr, ',')
            .edge_count() == 0);

  // Symmetric co-authorship matrix: one edge per upper-triangle nonzero.
  oracle::Lcg rng(3);
  const std::size_t n = 7;
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
  std::size_t upper = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.unit() < 0.4) {
        m[i][j] = m[j][i] = 1;
        ++upper;
      }
    }
  }
  std::string text = "id";
  for (std::size_t i = 0; i < n; ++i) text += ",v" + std::to_string(i);
  text += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    text += "v" + std::to_string(i);
    for (std::size_t j = 0; j < n; ++j) text += "," + std::to_string(m[i][j]);
    text += "\n";
  }
  const auto coauth = parse_adjacency_matrix(text, Layer::coauthorship, nullptr, ',');
  CHECK(coauth.edge_count() == upper);
  CHECK(parse_adjacency_matrix(write_adjacency_csv(coauth), Layer::coauthorship, nullptr, ',')
            .edges() == coauth.edges());

  const auto roster = roster_of({"a", "b"});
  CHECK(code_of([] { parse_adjacency_matrix("id,a,b\na,0,1\n", Layer::trust, nullptr, ','); }) ==
        ErrorCode::shape);
  CHECK(code_of([] {
          parse_adjacency_matrix("id,a,b\na,0,1\nb,0\n", Layer::trust, nullptr, ',');
        }) == ErrorCode::shape);
  CHECK(code_of([] {
          parse_adjacency_matrix("id,a,b\nb,0,1\na,0,0\n", Layer::trust, nullptr, ',');
        }) == ErrorCode::identifier);
  CHECK(code_of([&] {
          parse_adjacency_matrix("id,a,x\na,0,1\nx,0,0\n", Layer::trust, &roster, ',');
        }) == ErrorCode::identifier);
  CHECK(code_of([] {
          parse_adjacency_matrix("id,a,b\na,0,2\nb,0,0\n", Layer::trust, nullptr, ',');
        }) == ErrorCode::parse);
  CHECK(code_of([] {
          parse_adjacency_matrix("id,a,b\na,0,2\nb,1,0\n", Layer::coauthorship, nullptr, ',');
        }) == ErrorCode::shape);
}

TEST_CASE("bipartite projection") {
  const auto net = project_bipartite(
      {{"P1", "A"}, {"P1", "B"}, {"P1", "C"}, {"P2", "B"}, {"P2", "C"}});
  CHECK(net.nodes() == std::vector<std::string>{"A", "B", "C"});
  CHECK(net.edges() == std::vector<Edge>{{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 2.0}});

  const auto solo = project_bipartite({{"P1", "A"}});
  CHECK(solo.node_count() == 1);
  CHECK(solo.edge_count() == 0);

  // 79 papers over 391 authors, every author on at least one paper.
  std::vector<AuthorshipRecord> records;
  oracle::Lcg rng(19);
  for (int a = 0; a < 391; ++a) {
    records.push_back({"paper" + std::to_string(a % 79), "author" + std::to_string(a)});
    if (rng.unit() < 0.5) {
      records.push_back({"paper" + std::to_string(rng.next() % 79), "author" + std::to_string(a)});
    }
  }
  std::sort(records.begin(), records.end());
  records.erase(std::unique(records.begin(), records.end()), records.end());
  const auto big = project_bipartite(records);
  CHECK(big.node_count() == 391);

  // Weights against a nested loop over the records.
  std::map<std::pair<std::string, std::string>, double> shared;
  for (const auto& r : records) {
    for (const auto& s : records) {
      if (r.paper_id == s.paper_id && r.author_id < s.author_id) {
        shared[{r.author_id, s.author_id}] += 1.0;
      }
    }
  }
  REQUIRE(big.edge_count() == shared.size());
  for (const auto& e : big.edges()) {
    CHECK(shared.at({big.node(e.src), big.node(e.dst)}) == e.weight);
  }
}

TEST_CASE("authorship loading") {
  const auto path = temp_file("authorship.csv",
                              "paper_id,author_id\nP2,B\nP1,A\nP1,A\n,C\nP1,B\n");
  const auto loaded = load_authorship(path);
  CHECK(loaded.value ==
        std::vector<AuthorshipRecord>{{"P1", "A"}, {"P1", "B"}, {"P2", "B"}});
  CHECK(loaded.report.rows_read == 5);
  CHECK(loaded.report.rows_kept == 3);
  CHECK(loaded.report.rows_dropped() == 2);
  CHECK(write_authorship_csv(loaded.value) == "paper_id,author_id\nP1,A\nP1,B\nP2,B\n");
  CHECK(code_of([] { load_authorship(temp_file("bad_auth.csv", "paper,author\n1,2\n")); }) ==
        ErrorCode::parse);
}

TEST_CASE("canonical re-emit is lossless") {
  const std::string text =
      "id,label,gender,education,discipline,employer,country_origin,country_residence,"
      "race_ethnicity,lat,lon\n"
      "z,\"Doe, J\",f,doctorate,ecology,uni,BR,CA,,45.50880,-73.58781\n"
      "a,,m,,physics,,US,US,white,,\n"
      "m,Mid,,bachelor,,lab,,FR,,-12.25,130.875\n";
  const auto roster = parse_roster(text, ',', nullptr);
  const auto emitted = write_roster_csv(roster);
  CHECK(emitted.rfind("id,label,gender", 0) == 0);
  CHECK(emitted.find("\na,") < emitted.find("\nm,"));
  CHECK(emitted.find("\nm,") < emitted.find("\nz,"));
  const auto again = parse_roster(emitted, ',', nullptr);
  CHECK(write_roster_csv(again) == emitted);
  for (const auto& r : roster) CHECK(again.at(r.id) == r);

  const auto roster3 = roster_of({"c", "a", "b"});
  const auto net = parse_edge_list("src,dst,weight\nc,a,2\nb,a,1\nb,c,0.5\n", Layer::coauthorship,
                                   &roster3, ',', nullptr);
  const auto edges = write_edges_csv(net);
  CHECK(edges ==
        "src,dst,weight,layer\na,b,1,coauthorship\na,c,2,coauthorship\nb,c,0.5,coauthorship\n");
  const auto reloaded = parse_edge_list(edges, Layer::coauthorship, &roster3, ',', nullptr);
  CHECK(write_edges_csv(reloaded) == edges);
  CHECK(reloaded.edges() == net.edges());

  const auto directed = parse_edge_list("src,dst\nb,a\na,b\n", Layer::trust, &roster3, ',',
                                        nullptr);
  CHECK(write_edges_csv(directed) == "src,dst,weight,layer\na,b,1,trust\nb,a,1,trust\n");
}

TEST_CASE("ingest report json") {
  IngestReport report;
  parse_edge_list("src,dst\na,q\n", Layer::trust, nullptr, ',', &report);
  const auto json = report.to_json();
  CHECK(json.find("\"rows_read\"") != std::string::npos);
  CHECK(json.find("\"self_loops_dropped\"") != std::string::npos);
}
