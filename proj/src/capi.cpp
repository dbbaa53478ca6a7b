#include "collabnet/collabnet.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "collabnet/communities.hpp"
#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/fixtures.hpp"
#include "collabnet/homophily.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/metrics.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/permtest.hpp"
#include "collabnet/regression.hpp"
#include "collabnet/synth.hpp"

using namespace collabnet;

struct cn_roster {
  Roster value;
};
struct cn_network {
  Network value;
};
struct cn_dyads {
  DyadTable value;
};
struct cn_fit {
  FitResult value;
};
struct cn_partition {
  Partition value;
};

namespace {

thread_local std::string g_last_error;

cn_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return CN_ERR_IO;
    case ErrorCode::parse: return CN_ERR_PARSE;
    case ErrorCode::identifier: return CN_ERR_IDENTIFIER;
    case ErrorCode::duplicate_identifier: return CN_ERR_DUPLICATE_IDENTIFIER;
    case ErrorCode::shape: return CN_ERR_SHAPE;
    case ErrorCode::degenerate_input: return CN_ERR_DEGENERATE_INPUT;
    case ErrorCode::separation: return CN_ERR_SEPARATION;
    case ErrorCode::rank_deficient: return CN_ERR_RANK_DEFICIENT;
    case ErrorCode::non_convergence: return CN_ERR_NON_CONVERGENCE;
    case ErrorCode::config: return CN_ERR_CONFIG;
    case ErrorCode::spec: return CN_ERR_SPEC;
  }
  return CN_ERR_INTERNAL;
}

template <typename F>
cn_status guarded(F&& body) {
  try {
    body();
    return CN_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CN_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::config, std::string("invalid argument: ") + what);
}

cn_status invalid(const char* what) {
  g_last_error = std::string("invalid argument: ") + what;
  return CN_ERR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& text) {
  auto* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void emit(char** out, const std::string& text) {
  if (out) *out = duplicate(text);
}

Layer to_layer(cn_layer layer) {
  switch (layer) {
    case CN_LAYER_INFORMATION: return Layer::information;
    case CN_LAYER_TRUST: return Layer::trust;
    case CN_LAYER_COAUTHORSHIP: return Layer::coauthorship;
  }
  throw Error(ErrorCode::config, "unknown layer value");
}

std::vector<std::string> to_strings(const char* const* items, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    require(items && items[i], "null string in list");
    out.emplace_back(items[i]);
  }
  return out;
}

nlohmann::ordered_json cell_json(const std::string& text) {
  if (auto i = csv::parse_integer(text)) return *i;
  if (auto d = csv::parse_number(text)) return *d;
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.empty()) return nullptr;
  return text;
}

}  // namespace

extern "C" {

const char* cn_version(void) { return "1.0.0"; }

const char* cn_last_error(void) { return g_last_error.c_str(); }

const char* cn_status_name(cn_status status) {
  switch (status) {
    case CN_OK: return "ok";
    case CN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CN_ERR_IO: return "io";
    case CN_ERR_PARSE: return "parse";
    case CN_ERR_IDENTIFIER: return "identifier";
    case CN_ERR_DUPLICATE_IDENTIFIER: return "duplicate_identifier";
    case CN_ERR_SHAPE: return "shape";
    case CN_ERR_DEGENERATE_INPUT: return "degenerate_input";
    case CN_ERR_SEPARATION: return "separation";
    case CN_ERR_RANK_DEFICIENT: return "rank_deficient";
    case CN_ERR_NON_CONVERGENCE: return "non_convergence";
    case CN_ERR_CONFIG: return "config";
    case CN_ERR_SPEC: return "spec";
    case CN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void cn_string_free(char* text) { std::free(text); }

void cn_set_threads(unsigned threads) { set_thread_count(threads); }

cn_status cn_csv_to_json(const char* csv_text, char** out_json) {
  if (!csv_text || !out_json) return invalid("csv_text and out_json are required");
  return guarded([&] {
    const auto table = csv::parse(csv_text);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < table.header.size(); ++c) {
        obj[table.header[c]] = cell_json(c < row.fields.size() ? row.fields[c] : "");
      }
      rows.push_back(std::move(obj));
    }
    emit(out_json, rows.dump(2) + "\n");
  });
}

cn_status cn_roster_load(const char* path, char delimiter, cn_roster** out, char** report_json) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    auto loaded = load_roster(path, delimiter);
    emit(report_json, loaded.report.to_json());
    *out = new cn_roster{std::move(loaded.value)};
  });
}

cn_status cn_roster_parse(const char* text, char delimiter, cn_roster** out, char** report_json) {
  if (!text || !out) return invalid("text and out are required");
  return guarded([&] {
    IngestReport report;
    auto roster = parse_roster(text, delimiter, &report);
    emit(report_json, report.to_json());
    *out = new cn_roster{std::move(roster)};
  });
}

void cn_roster_free(cn_roster* roster) { delete roster; }

size_t cn_roster_size(const cn_roster* roster) { return roster ? roster->value.size() : 0; }

cn_status cn_roster_to_csv(const cn_roster* roster, char** out_csv) {
  if (!roster || !out_csv) return invalid("roster and out_csv are required");
  return guarded([&] { emit(out_csv, write_roster_csv(roster->value)); });
}

cn_status cn_network_load_edges(const char* path, cn_layer layer, const cn_roster* roster,
                                char delimiter, cn_network** out, char** report_json) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    auto loaded = load_edge_list(path, to_layer(layer), roster ? &roster->value : nullptr, delimiter);
    emit(report_json, loaded.report.to_json());
    *out = new cn_network{std::move(loaded.value)};
  });
}

cn_status cn_network_load_adjacency(const char* path, cn_layer layer, const cn_roster* roster,
                                    char delimiter, cn_network** out) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    *out = new cn_network{
        load_adjacency_matrix(path, to_layer(layer), roster ? &roster->value : nullptr, delimiter)};
  });
}

cn_status cn_network_load_authorship(const char* path, char delimiter, cn_network** out,
                                     char** report_json) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    auto loaded = load_authorship(path, delimiter);
    emit(report_json, loaded.report.to_json());
    *out = new cn_network{project_bipartite(loaded.value)};
  });
}

void cn_network_free(cn_network* net) { delete net; }

size_t cn_network_node_count(const cn_network* net) { return net ? net->value.node_count() : 0; }

size_t cn_network_edge_count(const cn_network* net) { return net ? net->value.edge_count() : 0; }

int cn_network_directed(const cn_network* net) { return net && net->value.directed() ? 1 : 0; }

cn_layer cn_network_layer(const cn_network* net) {
  if (!net) return CN_LAYER_INFORMATION;
  switch (net->value.layer()) {
    case Layer::information: return CN_LAYER_INFORMATION;
    case Layer::trust: return CN_LAYER_TRUST;
    case Layer::coauthorship: return CN_LAYER_COAUTHORSHIP;
  }
  return CN_LAYER_INFORMATION;
}

cn_status cn_network_to_edges_csv(const cn_network* net, char** out_csv) {
  if (!net || !out_csv) return invalid("net and out_csv are required");
  return guarded([&] { emit(out_csv, write_edges_csv(net->value)); });
}

cn_status cn_network_to_adjacency_csv(const cn_network* net, char** out_csv) {
  if (!net || !out_csv) return invalid("net and out_csv are required");
  return guarded([&] { emit(out_csv, write_adjacency_csv(net->value)); });
}

cn_status cn_metrics_report(const cn_network* net, cn_format format, char** out) {
  if (!net || !out) return invalid("net and out are required");
  return guarded([&] {
    const auto report = compute_metrics(net->value);
    emit(out, format == CN_FORMAT_JSON ? report.to_json() : report.to_csv());
  });
}

cn_status cn_metrics_density(const cn_network* net, double* out) {
  if (!net || !out) return invalid("net and out are required");
  return guarded([&] { *out = density(net->value); });
}

cn_status cn_centrality_csv(const cn_network* net, char** out_csv) {
  if (!net || !out_csv) return invalid("net and out_csv are required");
  return guarded([&] {
    std::vector<std::vector<double>> scores;
    for (auto m : kAllCentralities) scores.push_back(centrality_scores(net->value, m));
    std::string text;
    csv::append_row(text, {"id", "degree", "betweenness", "closeness", "eigenvector"});
    for (std::size_t i = 0; i < net->value.node_count(); ++i) {
      std::vector<std::string> row{net->value.node(i)};
      for (const auto& s : scores) row.push_back(csv::format_number(s[i]));
      csv::append_row(text, row);
    }
    emit(out_csv, text);
  });
}

cn_status cn_homophily_report(const cn_network* net, const cn_roster* roster,
                              const char* const* attributes, size_t attribute_count,
                              size_t permutations, uint64_t seed, int skip_degenerate,
                              char** out_csv) {
  if (!net || !roster || !out_csv) return invalid("net, roster and out_csv are required");
  return guarded([&] {
    std::vector<EIReport> reports;
    for (const auto& name : to_strings(attributes, attribute_count)) {
      try {
        reports.push_back(ei_normalized(net->value, roster->value, name, permutations, seed));
      } catch (const Error& e) {
        if (!(skip_degenerate && e.code() == ErrorCode::degenerate_input)) throw;
      }
    }
    emit(out_csv, ei_reports_csv(reports));
  });
}

cn_status cn_dyads_build(const cn_network* net, const cn_roster* roster,
                         const char* const* covariates, size_t covariate_count,
                         cn_ordering ordering, double distance_scale_km, cn_dyads** out) {
  if (!net || !roster || !out) return invalid("net, roster and out are required");
  return guarded([&] {
    std::optional<DyadOrdering> order;
    if (ordering == CN_ORDERING_ORDERED) order = DyadOrdering::ordered;
    if (ordering == CN_ORDERING_UNORDERED) order = DyadOrdering::unordered;
    *out = new cn_dyads{build_dyads(net->value, roster->value,
                                    to_strings(covariates, covariate_count), order,
                                    distance_scale_km)};
  });
}

void cn_dyads_free(cn_dyads* dyads) { delete dyads; }

size_t cn_dyads_row_count(const cn_dyads* dyads) { return dyads ? dyads->value.rows.size() : 0; }

size_t cn_dyads_dropped(const cn_dyads* dyads) {
  return dyads ? dyads->value.dropped_missing : 0;
}

cn_status cn_dyads_to_csv(const cn_dyads* dyads, char** out_csv) {
  if (!dyads || !out_csv) return invalid("dyads and out_csv are required");
  return guarded([&] { emit(out_csv, dyads->value.to_csv()); });
}

cn_status cn_fit_logistic(const cn_dyads* dyads, const char* const* include, size_t include_count,
                          cn_fit** out) {
  if (!dyads || !out) return invalid("dyads and out are required");
  return guarded([&] {
    *out = new cn_fit{fit_logistic(dyads->value, to_strings(include, include_count))};
  });
}

void cn_fit_free(cn_fit* fit) { delete fit; }

int cn_fit_converged(const cn_fit* fit) { return fit && fit->value.converged ? 1 : 0; }

size_t cn_fit_parameter_count(const cn_fit* fit) {
  return fit ? fit->value.parameter_count() : 0;
}

cn_status cn_fit_coefficient(const cn_fit* fit, const char* name, double* estimate,
                             double* std_error) {
  if (!fit || !name) return invalid("fit and name are required");
  return guarded([&] {
    const auto k = fit->value.find(name);
    if (!k) throw Error(ErrorCode::identifier, std::string("no coefficient named '") + name + "'");
    if (estimate) *estimate = fit->value.coefficients[*k].estimate;
    if (std_error) *std_error = fit->value.coefficients[*k].std_error;
  });
}

cn_status cn_fit_statistics(const cn_fit* fit, double* log_likelihood, double* deviance,
                            double* aic, double* bic, size_t* n_obs) {
  if (!fit) return invalid("fit is required");
  if (log_likelihood) *log_likelihood = fit->value.log_likelihood;
  if (deviance) *deviance = fit->value.deviance;
  if (aic) *aic = fit->value.aic;
  if (bic) *bic = fit->value.bic;
  if (n_obs) *n_obs = fit->value.n_obs;
  return CN_OK;
}

cn_status cn_fit_to_csv(const cn_fit* fit, char** out_csv) {
  if (!fit || !out_csv) return invalid("fit and out_csv are required");
  return guarded([&] { emit(out_csv, fit->value.to_csv()); });
}

cn_status cn_fit_curve(const cn_fit* fit, const double* grid_km, size_t grid_count,
                       const char* const* fixed_names, const double* fixed_values,
                       size_t fixed_count, char** out_csv) {
  if (!fit || !out_csv || (grid_count && !grid_km) || (fixed_count && !fixed_values)) {
    return invalid("fit, grid and out_csv are required");
  }
  return guarded([&] {
    std::map<std::string, double> fixed;
    const auto names = to_strings(fixed_names, fixed_count);
    for (std::size_t i = 0; i < fixed_count; ++i) fixed[names[i]] = fixed_values[i];
    const std::vector<double> grid(grid_km, grid_km + grid_count);
    emit(out_csv, curve_csv(predict_curve(fit->value, grid, fixed)));
  });
}

cn_status cn_walktrap(const cn_network* net, int walk_length, cn_partition** out) {
  if (!net || !out) return invalid("net and out are required");
  return guarded([&] { *out = new cn_partition{walktrap(net->value, walk_length)}; });
}

cn_status cn_partition_load(const char* path, char delimiter, cn_partition** out) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] { *out = new cn_partition{load_partition(path, delimiter)}; });
}

void cn_partition_free(cn_partition* partition) { delete partition; }

size_t cn_partition_community_count(const cn_partition* partition) {
  return partition ? partition->value.community_count() : 0;
}

double cn_partition_modularity(const cn_partition* partition) {
  return partition ? partition->value.modularity : 0.0;
}

cn_status cn_modularity(const cn_network* net, const cn_partition* partition, double* out) {
  if (!net || !partition || !out) return invalid("net, partition and out are required");
  return guarded([&] { *out = modularity(net->value, partition->value); });
}

cn_status cn_partition_to_csv(const cn_partition* partition, char** out_csv) {
  if (!partition || !out_csv) return invalid("partition and out_csv are required");
  return guarded([&] { emit(out_csv, partition->value.to_csv()); });
}

cn_status cn_partition_summary_csv(const cn_partition* partition, char** out_csv) {
  if (!partition || !out_csv) return invalid("partition and out_csv are required");
  return guarded([&] { emit(out_csv, community_summary(partition->value).to_csv()); });
}

cn_status cn_partition_merges_csv(const cn_partition* partition, char** out_csv) {
  if (!partition || !out_csv) return invalid("partition and out_csv are required");
  return guarded([&] { emit(out_csv, partition->value.merges_csv()); });
}

void cn_permtest_options_init(cn_permtest_options* options) {
  if (!options) return;
  options->statistic = CN_STAT_MEAN_INTRA_DISTANCE;
  options->permutations = 1000;
  options->seed = 0;
  options->alternative = CN_ALTERNATIVE_LESS;
  options->pooling = CN_POOLING_POOLED;
  options->histogram_bins = 30;
}

cn_status cn_permtest(const cn_partition* partition, const cn_roster* roster,
                      const cn_permtest_options* options, char** summary_csv,
                      char** histogram_csv, double* p_value) {
  if (!partition || !roster || !options) return invalid("partition, roster and options are required");
  return guarded([&] {
    PermTestOptions opts;
    opts.statistic = options->statistic == CN_STAT_SAME_COUNTRY_SHARE
                         ? Statistic::same_country_share
                         : Statistic::mean_intra_distance;
    opts.replicates = options->permutations;
    opts.seed = options->seed;
    opts.alternative =
        options->alternative == CN_ALTERNATIVE_GREATER ? Alternative::greater : Alternative::less;
    opts.pooling = options->pooling == CN_POOLING_PER_COMMUNITY ? DistancePooling::per_community
                                                                : DistancePooling::pooled;
    const auto result = permutation_test(partition->value, roster->value, opts);
    emit(summary_csv, result.summary_csv());
    emit(histogram_csv, result.histogram_csv(options->histogram_bins));
    if (p_value) *p_value = result.p_value;
  });
}

cn_status cn_synth_dyadic(const char* spec_json, cn_roster** roster, cn_network** net) {
  if (!roster || !net) return invalid("roster and net are required");
  return guarded([&] {
    const auto spec = spec_json ? dyadic_spec_from_json(spec_json) : demo_spec();
    auto sample = generate_dyadic_network(spec);
    *roster = new cn_roster{std::move(sample.roster)};
    *net = new cn_network{std::move(sample.network)};
  });
}

cn_status cn_synth_demo_spec(char** out_json) {
  if (!out_json) return invalid("out_json is required");
  return guarded([&] { emit(out_json, to_json(demo_spec())); });
}

cn_status cn_synth_planted(const char* spec_json, cn_roster** roster, cn_network** net,
                           cn_partition** truth) {
  if (!spec_json || !roster || !net) return invalid("spec_json, roster and net are required");
  return guarded([&] {
    auto sample = generate_planted_partition(planted_spec_from_json(spec_json));
    *roster = new cn_roster{std::move(sample.roster)};
    *net = new cn_network{std::move(sample.network)};
    if (truth) *truth = new cn_partition{std::move(sample.truth)};
  });
}

cn_status cn_fixtures_verify(const char* path, char** out_csv, size_t* failures) {
  if (!path) return invalid("path is required");
  return guarded([&] {
    const auto report = verify_identities(load_fixtures(path));
    emit(out_csv, report.to_csv());
    if (failures) *failures = report.failures();
  });
}

}  // extern "C"
