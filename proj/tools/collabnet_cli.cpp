// collabnet command-line front end. Talks to the library only through the C
// API in collabnet/collabnet.h.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collabnet/collabnet.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kOutEnv = "COLLABNET_OUT_DIR";
constexpr const char* kDefaultOut = "collabnet_out";

int exit_code_for(cn_status status) {
  switch (status) {
    case CN_OK:
      return kExitOk;
    case CN_ERR_INVALID_ARGUMENT:
    case CN_ERR_CONFIG:
    case CN_ERR_SPEC:
      return kExitConfig;
    case CN_ERR_IO:
    case CN_ERR_PARSE:
    case CN_ERR_IDENTIFIER:
    case CN_ERR_DUPLICATE_IDENTIFIER:
    case CN_ERR_SHAPE:
    case CN_ERR_DEGENERATE_INPUT:
    case CN_ERR_RANK_DEFICIENT:
      return kExitData;
    case CN_ERR_SEPARATION:
    case CN_ERR_NON_CONVERGENCE:
      return kExitNumerical;
    case CN_ERR_INTERNAL:
      break;
  }
  return kExitInternal;
}

struct Failure {
  int exit_code;
  std::string message;
};

// Throws a Failure carrying the library message when status is not CN_OK.
void check(cn_status status, const std::string& context) {
  if (status == CN_OK) return;
  throw Failure{exit_code_for(status),
                context + ": " + cn_status_name(status) + ": " + cn_last_error()};
}

[[noreturn]] void config_error(const std::string& message) {
  throw Failure{kExitConfig, message};
}

struct StringDeleter {
  void operator()(char* p) const { cn_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

std::string take(char* raw) {
  CString owned(raw);
  return owned ? std::string(owned.get()) : std::string();
}

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using Roster = std::unique_ptr<cn_roster, HandleDeleter<cn_roster, cn_roster_free>>;
using Network = std::unique_ptr<cn_network, HandleDeleter<cn_network, cn_network_free>>;
using Dyads = std::unique_ptr<cn_dyads, HandleDeleter<cn_dyads, cn_dyads_free>>;
using Fit = std::unique_ptr<cn_fit, HandleDeleter<cn_fit, cn_fit_free>>;
using PartitionH = std::unique_ptr<cn_partition, HandleDeleter<cn_partition, cn_partition_free>>;

struct Options {
  std::string nodes;
  std::string edges;
  std::string adjacency;
  std::string authorship;
  std::string partition;
  std::string layer = "information";
  std::string delimiter = ",";
  std::vector<std::string> covariates{"distance", "gender", "education", "discipline",
                                      "employer"};
  std::vector<std::string> attributes{"gender",           "education",
                                      "discipline",       "employer",
                                      "country_origin",   "country_residence",
                                      "race_ethnicity"};
  double distance_scale = 100.0;
  std::string ordering = "default";
  int walk_length = 4;
  std::size_t permutations = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  std::string statistic = "mean_intra_distance";
  std::string direction = "less";
  std::string pooling = "pooled";
  std::size_t bins = 30;
  std::vector<std::string> curve_fixed;
  double curve_max_km = 10000.0;
  double curve_step_km = 100.0;
  std::string spec;
  std::string kind = "dyadic";
  std::string fixtures = "fixtures/paper_values.csv";
};

char delimiter_char(const std::string& text) {
  if (text == "tab" || text == "\\t" || text == "\t") return '\t';
  if (text.size() == 1) return text[0];
  config_error("--delimiter must be a single character or 'tab'");
}

cn_layer layer_value(const std::string& text) {
  if (text == "information") return CN_LAYER_INFORMATION;
  if (text == "trust") return CN_LAYER_TRUST;
  if (text == "coauthorship") return CN_LAYER_COAUTHORSHIP;
  config_error("unknown --layer '" + text + "' (expected information, trust or coauthorship)");
}

const char* layer_name(cn_layer layer) {
  switch (layer) {
    case CN_LAYER_INFORMATION: return "information";
    case CN_LAYER_TRUST: return "trust";
    case CN_LAYER_COAUTHORSHIP: return "coauthorship";
  }
  return "information";
}

cn_ordering ordering_value(const std::string& text) {
  if (text == "default") return CN_ORDERING_DEFAULT;
  if (text == "ordered") return CN_ORDERING_ORDERED;
  if (text == "unordered") return CN_ORDERING_UNORDERED;
  config_error("unknown --ordering '" + text + "' (expected default, ordered or unordered)");
}

std::vector<const char*> c_strings(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  for (const auto& s : items) out.push_back(s.c_str());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Output {
 public:
  Output(fs::path dir, std::string format) : dir_(std::move(dir)), format_(std::move(format)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Failure{kExitConfig, "cannot create output directory '" + dir_.string() + "'"};
  }

  const fs::path& dir() const { return dir_; }

  // CSV tables become <stem>.csv, or <stem>.json under --format json.
  void table(const std::string& stem, const std::string& csv_text) {
    if (format_ == "json") {
      char* raw = nullptr;
      check(cn_csv_to_json(csv_text.c_str(), &raw), "json conversion");
      raw_file(stem + ".json", take(raw));
    } else {
      raw_file(stem + ".csv", csv_text);
    }
  }

  void raw_file(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Failure{kExitData, "cannot write '" + path.string() + "'"};
    written_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path dir_;
  std::string format_;
  std::vector<std::string> written_;
};

fs::path resolve_out_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return kDefaultOut;
}

// Loaded inputs for one run. The network is optional for subcommands that
// only need a roster and a partition.
struct Inputs {
  Roster roster;
  Network network;
  std::string roster_report;
  std::string network_report;
};

Roster load_roster(const Options& o, std::string* report) {
  cn_roster* raw = nullptr;
  char* rep = nullptr;
  check(cn_roster_load(o.nodes.c_str(), delimiter_char(o.delimiter), &raw, &rep),
        "--nodes " + o.nodes);
  Roster roster(raw);
  *report = take(rep);
  return roster;
}

Inputs load_inputs(const Options& o, bool need_roster, bool need_network) {
  Inputs in;
  const char delim = delimiter_char(o.delimiter);
  if (!o.nodes.empty()) {
    in.roster = load_roster(o, &in.roster_report);
  } else if (need_roster) {
    config_error("--nodes is required for this subcommand");
  }
  const int sources = !o.edges.empty() + !o.adjacency.empty() + !o.authorship.empty();
  if (sources > 1) config_error("give only one of --edges, --adjacency, --authorship");
  if (sources == 0) {
    if (need_network) config_error("one of --edges, --adjacency, --authorship is required");
    return in;
  }
  cn_network* net = nullptr;
  if (!o.edges.empty()) {
    char* rep = nullptr;
    check(cn_network_load_edges(o.edges.c_str(), layer_value(o.layer), in.roster.get(), delim,
                                &net, &rep),
          "--edges " + o.edges);
    in.network_report = take(rep);
  } else if (!o.adjacency.empty()) {
    check(cn_network_load_adjacency(o.adjacency.c_str(), layer_value(o.layer), in.roster.get(),
                                    delim, &net),
          "--adjacency " + o.adjacency);
  } else {
    char* rep = nullptr;
    check(cn_network_load_authorship(o.authorship.c_str(), delim, &net, &rep),
          "--authorship " + o.authorship);
    in.network_report = take(rep);
  }
  in.network.reset(net);
  return in;
}

// Resolved configuration; identical inputs give an identical document, so it
// contains neither timestamps nor the thread count.
json resolved_config(const std::string& command, const Options& o) {
  json c;
  c["tool"] = "collabnet";
  c["version"] = cn_version();
  c["subcommand"] = command;
  c["inputs"] = {{"nodes", o.nodes},          {"edges", o.edges},
                 {"adjacency", o.adjacency},  {"authorship", o.authorship},
                 {"partition", o.partition},  {"spec", o.spec},
                 {"fixtures", o.fixtures},    {"delimiter", o.delimiter}};
  c["layer"] = o.authorship.empty() ? o.layer : "coauthorship";
  c["seed"] = o.seed;
  c["format"] = o.format;
  c["covariates"] = o.covariates;
  c["distance_scale_km"] = o.distance_scale;
  c["ordering"] = o.ordering;
  c["walk_length"] = o.walk_length;
  c["permutations"] = o.permutations;
  c["attributes"] = o.attributes;
  c["statistic"] = o.statistic;
  c["direction"] = o.direction;
  c["pooling"] = o.pooling;
  c["bins"] = o.bins;
  c["curve"] = {{"fixed", o.curve_fixed},
                {"max_km", o.curve_max_km},
                {"step_km", o.curve_step_km}};
  c["synth_kind"] = o.kind;
  return c;
}

void write_run_files(Output& out, const std::string& command, const Options& o,
                     std::chrono::steady_clock::time_point started, int status) {
  out.raw_file("config.json", resolved_config(command, o).dump(2) + "\n");
  json meta;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["finished_utc"] = stamp;
  meta["elapsed_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  meta["threads"] = o.threads == 0 ? std::thread::hardware_concurrency() : o.threads;
  meta["exit_status"] = status;
  meta["files"] = out.written();
  out.raw_file("run_metadata.json", meta.dump(2) + "\n");
}

// ---- analyses --------------------------------------------------------------

std::string metrics_text(const Inputs& in, cn_format format) {
  char* raw = nullptr;
  check(cn_metrics_report(in.network.get(), format, &raw), "metrics");
  return take(raw);
}

void run_metrics(const Options& o, const Inputs& in, Output& out) {
  if (o.format == "json") {
    out.raw_file("metrics.json", metrics_text(in, CN_FORMAT_JSON));
  } else {
    out.raw_file("metrics.csv", metrics_text(in, CN_FORMAT_CSV));
  }
  char* raw = nullptr;
  check(cn_centrality_csv(in.network.get(), &raw), "centrality");
  out.table("centrality", take(raw));
}

std::string homophily_csv(const Options& o, const Inputs& in, bool skip_degenerate) {
  const auto attrs = c_strings(o.attributes);
  char* raw = nullptr;
  check(cn_homophily_report(in.network.get(), in.roster.get(), attrs.data(), attrs.size(),
                            o.permutations, o.seed, skip_degenerate ? 1 : 0, &raw),
        "homophily");
  return take(raw);
}

std::map<std::string, double> parse_fixed(const std::vector<std::string>& items) {
  std::map<std::string, double> fixed;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) config_error("--curve-fixed expects name=value, got '" + item + "'");
    try {
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      fixed[item.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      config_error("--curve-fixed value is not a number in '" + item + "'");
    }
  }
  return fixed;
}

void run_regression(const Options& o, const Inputs& in, Output& out, const std::string& curve_stem) {
  const auto covs = c_strings(o.covariates);
  cn_dyads* dyads_raw = nullptr;
  check(cn_dyads_build(in.network.get(), in.roster.get(), covs.data(), covs.size(),
                       ordering_value(o.ordering), o.distance_scale, &dyads_raw),
        "dyad table");
  Dyads dyads(dyads_raw);
  cn_fit* fit_raw = nullptr;
  check(cn_fit_logistic(dyads.get(), covs.data(), covs.size(), &fit_raw), "logistic fit");
  Fit fit(fit_raw);
  if (!cn_fit_converged(fit.get())) {
    throw Failure{kExitNumerical, "logistic fit did not converge within the iteration limit"};
  }
  char* raw = nullptr;
  check(cn_fit_to_csv(fit.get(), &raw), "regression table");
  out.table("regression", take(raw));

  bool has_distance = false;
  for (const auto& c : o.covariates) has_distance |= c == "distance";
  if (!has_distance) return;

  if (!(o.curve_step_km > 0.0) || !(o.curve_max_km >= 0.0)) {
    config_error("--curve-step-km must be positive and --curve-max-km non-negative");
  }
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double d = static_cast<double>(k) * o.curve_step_km;
    if (d > o.curve_max_km + 1e-9) break;
    grid.push_back(d);
  }
  auto fixed = parse_fixed(o.curve_fixed);
  for (const auto& c : o.covariates) {
    if (c != "distance") fixed.emplace(c, 0.0);
  }
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& [name, value] : fixed) {
    names.push_back(name);
    values.push_back(value);
  }
  const auto cnames = c_strings(names);
  check(cn_fit_curve(fit.get(), grid.data(), grid.size(), cnames.data(), values.data(),
                     values.size(), &raw),
        "probability curve");
  out.table(curve_stem, take(raw));
}

PartitionH obtain_partition(const Options& o, const Inputs& in) {
  cn_partition* raw = nullptr;
  if (!o.partition.empty()) {
    check(cn_partition_load(o.partition.c_str(), delimiter_char(o.delimiter), &raw),
          "--partition " + o.partition);
  } else if (in.network) {
    check(cn_walktrap(in.network.get(), o.walk_length, &raw), "walktrap");
  } else {
    config_error("permtest needs --partition or a network to detect communities on");
  }
  return PartitionH(raw);
}

void write_partition(const Inputs& in, const cn_partition* partition, Output& out) {
  char* raw = nullptr;
  check(cn_partition_to_csv(partition, &raw), "partition");
  out.table("partition", take(raw));
  check(cn_partition_summary_csv(partition, &raw), "community summary");
  out.table("community_summary", take(raw));
  check(cn_partition_merges_csv(partition, &raw), "merge history");
  out.table("merges", take(raw));
  double q = cn_partition_modularity(partition);
  if (in.network) check(cn_modularity(in.network.get(), partition, &q), "modularity");
  std::ostringstream stats;
  stats << "key,value\ncommunities," << cn_partition_community_count(partition)
        << "\nmodularity," << json(q).dump() << "\n";
  out.table("community_stats", stats.str());
}

cn_permtest_options permtest_options(const Options& o, const std::string& statistic) {
  cn_permtest_options p;
  cn_permtest_options_init(&p);
  if (statistic == "mean_intra_distance") {
    p.statistic = CN_STAT_MEAN_INTRA_DISTANCE;
  } else if (statistic == "same_country_share") {
    p.statistic = CN_STAT_SAME_COUNTRY_SHARE;
  } else {
    config_error("unknown --statistic '" + statistic +
                 "' (expected mean_intra_distance or same_country_share)");
  }
  if (o.direction == "less") {
    p.alternative = CN_ALTERNATIVE_LESS;
  } else if (o.direction == "greater") {
    p.alternative = CN_ALTERNATIVE_GREATER;
  } else {
    config_error("unknown --direction '" + o.direction + "' (expected less or greater)");
  }
  if (o.pooling == "pooled") {
    p.pooling = CN_POOLING_POOLED;
  } else if (o.pooling == "per_community") {
    p.pooling = CN_POOLING_PER_COMMUNITY;
  } else {
    config_error("unknown --pooling '" + o.pooling + "' (expected pooled or per_community)");
  }
  p.permutations = o.permutations;
  p.seed = o.seed;
  p.histogram_bins = o.bins;
  return p;
}

void run_permtest(const Options& o, const Inputs& in, const cn_partition* partition,
                  const std::string& statistic, const std::string& summary_stem,
                  const std::string& histogram_stem, Output& out) {
  const auto opts = permtest_options(o, statistic);
  char* summary = nullptr;
  char* histogram = nullptr;
  check(cn_permtest(partition, in.roster.get(), &opts, &summary, &histogram, nullptr),
        "permutation test (" + statistic + ")");
  out.table(summary_stem, take(summary));
  out.table(histogram_stem, take(histogram));
}

json csv_rows(const std::string& csv_text) {
  char* raw = nullptr;
  check(cn_csv_to_json(csv_text.c_str(), &raw), "json conversion");
  return json::parse(take(raw));
}

std::string number(double v) { return json(v).dump(); }

// Bar values for the centralization figure.
std::string centralization_bars(const Inputs& in) {
  const auto metrics = json::parse(metrics_text(in, CN_FORMAT_JSON));
  std::string text = "measure,value\n";
  for (const char* m : {"degree", "betweenness", "closeness", "eigenvector"}) {
    const auto key = std::string("centralization_") + m;
    text += std::string(m) + "," + number(metrics.at(key).get<double>()) + "\n";
  }
  return text;
}

// Bar values for the homophily figure.
std::string homophily_bars(const std::string& homophily) {
  std::string text = "attribute,ei_raw,ei_normalized\n";
  for (const auto& row : csv_rows(homophily)) {
    text += row.at("attribute").get<std::string>() + "," +
            number(row.at("ei_raw").get<double>()) + "," +
            number(row.at("ei_normalized").get<double>()) + "\n";
  }
  return text;
}

// ---- report ----------------------------------------------------------------

// Runs one report stage; a failing stage is logged and the report goes on.
struct StageLog {
  int worst = kExitOk;
  std::string csv = "stage,status,message\n";

  template <typename F>
  void run(const std::string& stage, F&& body) {
    try {
      body();
      csv += stage + ",ok,\n";
    } catch (const Failure& f) {
      std::cerr << "collabnet report: " << stage << ": " << f.message << "\n";
      std::string msg = f.message;
      for (auto& ch : msg) {
        if (ch == '"') ch = '\'';
      }
      csv += stage + ",failed,\"" + msg + "\"\n";
      if (worst == kExitOk || f.exit_code > worst) worst = f.exit_code;
    }
  }
};

int run_report(const Options& o, const Inputs& in, Output& out) {
  StageLog log;
  log.run("metrics", [&] {
    run_metrics(o, in, out);
    out.table("fig4_centralization", centralization_bars(in));
  });
  log.run("homophily", [&] {
    const auto h = homophily_csv(o, in, true);
    out.table("homophily", h);
    out.table("fig6_homophily", homophily_bars(h));
  });
  log.run("regression", [&] { run_regression(o, in, out, "fig7_curve"); });
  PartitionH partition;
  log.run("communities", [&] {
    partition = obtain_partition(o, in);
    write_partition(in, partition.get(), out);
  });
  if (partition) {
    log.run("permtest_distance", [&] {
      run_permtest(o, in, partition.get(), "mean_intra_distance", "permtest_distance",
                   "fig8_distance_histogram", out);
    });
    log.run("permtest_country", [&] {
      run_permtest(o, in, partition.get(), "same_country_share", "permtest_country",
                   "permtest_country_histogram", out);
    });
  }
  out.raw_file("report_stages.csv", log.csv);
  return log.worst;
}

int run_synth(const Options& o, Output& out) {
  cn_roster* roster_raw = nullptr;
  cn_network* net_raw = nullptr;
  const std::string spec_text = o.spec.empty() ? std::string() : read_file(o.spec);
  if (o.kind == "dyadic") {
    if (o.spec.empty()) {
      char* raw = nullptr;
      check(cn_synth_demo_spec(&raw), "demo spec");
      out.raw_file("spec.json", take(raw));
    }
    check(cn_synth_dyadic(o.spec.empty() ? nullptr : spec_text.c_str(), &roster_raw, &net_raw),
          "synth");
  } else if (o.kind == "planted") {
    if (o.spec.empty()) config_error("--kind planted needs --spec");
    cn_partition* truth_raw = nullptr;
    check(cn_synth_planted(spec_text.c_str(), &roster_raw, &net_raw, &truth_raw), "synth");
    PartitionH truth(truth_raw);
    char* raw = nullptr;
    check(cn_partition_to_csv(truth.get(), &raw), "partition");
    out.raw_file("truth.csv", take(raw));
  } else {
    config_error("unknown --kind '" + o.kind + "' (expected dyadic or planted)");
  }
  Roster roster(roster_raw);
  Network net(net_raw);
  char* raw = nullptr;
  check(cn_roster_to_csv(roster.get(), &raw), "roster");
  out.raw_file("nodes.csv", take(raw));
  check(cn_network_to_edges_csv(net.get(), &raw), "edges");
  out.raw_file("edges.csv", take(raw));
  return kExitOk;
}

int run_ingest(const Inputs& in, Output& out) {
  json report;
  if (in.roster) {
    char* raw = nullptr;
    check(cn_roster_to_csv(in.roster.get(), &raw), "roster");
    out.raw_file("nodes.csv", take(raw));
    report["nodes"] = json::parse(in.roster_report);
  }
  if (in.network) {
    char* raw = nullptr;
    check(cn_network_to_edges_csv(in.network.get(), &raw), "edges");
    out.raw_file("edges.csv", take(raw));
    report["network"] = {{"layer", layer_name(cn_network_layer(in.network.get()))},
                         {"directed", cn_network_directed(in.network.get()) != 0},
                         {"nodes", cn_network_node_count(in.network.get())},
                         {"ties", cn_network_edge_count(in.network.get())}};
    if (!in.network_report.empty()) report["edges"] = json::parse(in.network_report);
  }
  out.raw_file("ingest_report.json", report.dump(2) + "\n");
  return kExitOk;
}

int run_verify(const Options& o, Output& out) {
  char* raw = nullptr;
  std::size_t failures = 0;
  check(cn_fixtures_verify(o.fixtures.c_str(), &raw, &failures), "--fixtures " + o.fixtures);
  out.table("identity_report", take(raw));
  if (failures > 0) {
    std::cerr << "collabnet verify-fixtures: " << failures << " identity check(s) failed\n";
    return kExitData;
  }
  return kExitOk;
}

// ---- command line ----------------------------------------------------------

void add_io(CLI::App* sub, Options& o, bool network_inputs) {
  sub->add_option("--nodes", o.nodes, "Researcher roster CSV");
  if (network_inputs) {
    sub->add_option("--edges", o.edges, "Edge list CSV (src,dst[,weight][,layer])");
    sub->add_option("--adjacency", o.adjacency, "Adjacency matrix CSV with id header");
    sub->add_option("--authorship", o.authorship, "paper_id,author_id CSV (co-authorship layer)");
    sub->add_option("--layer", o.layer, "information, trust or coauthorship")
        ->check(CLI::IsMember({"information", "trust", "coauthorship"}));
  }
  sub->add_option("--delimiter", o.delimiter, "Field delimiter (single character or 'tab')");
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, std::string("Output directory (default $") + kOutEnv +
                                      " or " + kDefaultOut + ")");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", o.threads, "Worker thread cap (0 = all cores)");
}

void add_seeded(CLI::App* sub, Options& o) {
  sub->add_option("--permutations", o.permutations, "Number of permutations")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Random seed");
}

void add_regression(CLI::App* sub, Options& o) {
  sub->add_option("--covariates", o.covariates, "distance and/or attribute names")
      ->delimiter(',');
  sub->add_option("--distance-scale", o.distance_scale, "Kilometres per distance unit")
      ->check(CLI::PositiveNumber);
  sub->add_option("--ordering", o.ordering, "default, ordered or unordered dyads");
  sub->add_option("--curve-fixed", o.curve_fixed,
                  "name=value for non-distance covariates on the curve (default 0)")
      ->delimiter(',');
  sub->add_option("--curve-max-km", o.curve_max_km, "Largest curve distance");
  sub->add_option("--curve-step-km", o.curve_step_km, "Curve grid spacing");
}

void add_permtest(CLI::App* sub, Options& o) {
  sub->add_option("--partition", o.partition, "id,community CSV (default: walktrap on network)");
  sub->add_option("--direction", o.direction, "less or greater");
  sub->add_option("--pooling", o.pooling, "pooled or per_community");
  sub->add_option("--bins", o.bins, "Histogram bins")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collabnet: network analysis of international research collaborations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cn_version());
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Validate inputs and write normalized CSVs");
  add_io(ingest, o, true);
  add_output(ingest, o);

  auto* metrics = app.add_subcommand("metrics", "Whole-network metrics and centralities");
  add_io(metrics, o, true);
  add_output(metrics, o);

  auto* homophily = app.add_subcommand("homophily", "E-I index per attribute");
  add_io(homophily, o, true);
  add_output(homophily, o);
  add_seeded(homophily, o);
  homophily->add_option("--attributes", o.attributes, "Attributes to score")->delimiter(',');

  auto* regress = app.add_subcommand("regress", "Dyadic logistic regression");
  add_io(regress, o, true);
  add_output(regress, o);
  add_regression(regress, o);

  auto* communities = app.add_subcommand("communities", "Walktrap community detection");
  add_io(communities, o, true);
  add_output(communities, o);
  communities->add_option("--walk-length", o.walk_length, "Random-walk length t")
      ->check(CLI::PositiveNumber);

  auto* permtest = app.add_subcommand("permtest", "Community geography permutation test");
  add_io(permtest, o, true);
  add_output(permtest, o);
  add_seeded(permtest, o);
  add_permtest(permtest, o);
  permtest->add_option("--statistic", o.statistic, "mean_intra_distance or same_country_share");
  permtest->add_option("--walk-length", o.walk_length, "Walk length when detecting communities")
      ->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic roster and network");
  add_output(synth, o);
  synth->add_option("--spec", o.spec, "Generator spec JSON (default: bundled demo)");
  synth->add_option("--kind", o.kind, "dyadic or planted");

  auto* report = app.add_subcommand("report", "Full analysis bundle for one network");
  add_io(report, o, true);
  add_output(report, o);
  add_seeded(report, o);
  add_regression(report, o);
  add_permtest(report, o);
  report->add_option("--attributes", o.attributes, "Attributes to score")->delimiter(',');
  report->add_option("--walk-length", o.walk_length, "Random-walk length t")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify-fixtures", "Check published-value identities");
  add_output(verify, o);
  verify->add_option("--fixtures", o.fixtures, "Fixture CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  const std::string command = app.get_subcommands().front()->get_name();
  cn_set_threads(o.threads);
  try {
    Output out(resolve_out_dir(o), o.format);
    int status = kExitOk;
    if (command == "synth") {
      status = run_synth(o, out);
    } else if (command == "verify-fixtures") {
      status = run_verify(o, out);
    } else {
      const bool needs_roster = command == "homophily" || command == "regress" ||
                                command == "permtest" || command == "report";
      const bool needs_network = command != "permtest" && command != "ingest";
      const auto in = load_inputs(o, needs_roster, needs_network);
      if (command == "ingest") {
        if (!in.roster && !in.network) config_error("ingest needs --nodes and/or a network input");
        status = run_ingest(in, out);
      } else if (command == "metrics") {
        run_metrics(o, in, out);
      } else if (command == "homophily") {
        // Default attributes the data cannot score are flagged, not fatal.
        const bool explicit_list = homophily->count("--attributes") > 0;
        out.table("homophily", homophily_csv(o, in, !explicit_list));
      } else if (command == "regress") {
        run_regression(o, in, out, "curve");
      } else if (command == "communities") {
        const auto partition = obtain_partition(o, in);
        write_partition(in, partition.get(), out);
      } else if (command == "permtest") {
        const auto partition = obtain_partition(o, in);
        run_permtest(o, in, partition.get(), o.statistic, "permtest_summary",
                     "permtest_histogram", out);
      } else {
        status = run_report(o, in, out);
      }
    }
    write_run_files(out, command, o, started, status);
    return status;
  } catch (const Failure& f) {
    std::cerr << "collabnet " << command << ": " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "collabnet " << command << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
