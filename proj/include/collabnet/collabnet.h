/*
 * collabnet C API.
 *
 * Every object is an opaque handle created by a cn_*_load / cn_*_build /
 * generator call and released with the matching cn_*_free. Functions that
 * can fail return a cn_status; on failure cn_last_error() describes the
 * problem (thread-local, valid until the next failing call on the thread).
 * Strings returned through char** are heap allocated and must be released
 * with cn_string_free.
 */
#ifndef COLLABNET_H
#define COLLABNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(COLLABNET_BUILDING)
#define CN_API __attribute__((visibility("default")))
#else
#define CN_API
#endif

typedef struct cn_roster cn_roster;
typedef struct cn_network cn_network;
typedef struct cn_dyads cn_dyads;
typedef struct cn_fit cn_fit;
typedef struct cn_partition cn_partition;

typedef enum {
  CN_OK = 0,
  CN_ERR_INVALID_ARGUMENT = 1,
  CN_ERR_IO = 2,
  CN_ERR_PARSE = 3,
  CN_ERR_IDENTIFIER = 4,
  CN_ERR_DUPLICATE_IDENTIFIER = 5,
  CN_ERR_SHAPE = 6,
  CN_ERR_DEGENERATE_INPUT = 7,
  CN_ERR_SEPARATION = 8,
  CN_ERR_RANK_DEFICIENT = 9,
  CN_ERR_NON_CONVERGENCE = 10,
  CN_ERR_CONFIG = 11,
  CN_ERR_SPEC = 12,
  CN_ERR_INTERNAL = 99
} cn_status;

typedef enum {
  CN_LAYER_INFORMATION = 0,
  CN_LAYER_TRUST = 1,
  CN_LAYER_COAUTHORSHIP = 2
} cn_layer;

typedef enum { CN_FORMAT_CSV = 0, CN_FORMAT_JSON = 1 } cn_format;

typedef enum {
  CN_ORDERING_DEFAULT = 0, /* ordered for directed layers, unordered otherwise */
  CN_ORDERING_ORDERED = 1,
  CN_ORDERING_UNORDERED = 2
} cn_ordering;

typedef enum {
  CN_STAT_MEAN_INTRA_DISTANCE = 0,
  CN_STAT_SAME_COUNTRY_SHARE = 1
} cn_statistic;

typedef enum { CN_ALTERNATIVE_LESS = 0, CN_ALTERNATIVE_GREATER = 1 } cn_alternative;

typedef enum { CN_POOLING_POOLED = 0, CN_POOLING_PER_COMMUNITY = 1 } cn_pooling;

CN_API const char* cn_version(void);
CN_API const char* cn_last_error(void);
CN_API const char* cn_status_name(cn_status status);
CN_API void cn_string_free(char* text);

/* Caps worker threads for replicate loops; 0 = hardware concurrency.
 * Results are identical for every setting. */
CN_API void cn_set_threads(unsigned threads);

/* Re-encodes a CSV document as a JSON array of row objects; numeric cells
 * become numbers. */
CN_API cn_status cn_csv_to_json(const char* csv_text, char** out_json);

/* ---- ingest ---------------------------------------------------------- */

CN_API cn_status cn_roster_load(const char* path, char delimiter, cn_roster** out,
                                char** report_json);
CN_API cn_status cn_roster_parse(const char* text, char delimiter, cn_roster** out,
                                 char** report_json);
CN_API void cn_roster_free(cn_roster* roster);
CN_API size_t cn_roster_size(const cn_roster* roster);
CN_API cn_status cn_roster_to_csv(const cn_roster* roster, char** out_csv);

/* roster may be NULL; the node list then comes from the edge endpoints. */
CN_API cn_status cn_network_load_edges(const char* path, cn_layer layer, const cn_roster* roster,
                                       char delimiter, cn_network** out, char** report_json);
CN_API cn_status cn_network_load_adjacency(const char* path, cn_layer layer,
                                           const cn_roster* roster, char delimiter,
                                           cn_network** out);
/* Co-authorship layer projected from paper_id,author_id rows. */
CN_API cn_status cn_network_load_authorship(const char* path, char delimiter, cn_network** out,
                                            char** report_json);
CN_API void cn_network_free(cn_network* net);
CN_API size_t cn_network_node_count(const cn_network* net);
CN_API size_t cn_network_edge_count(const cn_network* net);
CN_API int cn_network_directed(const cn_network* net);
CN_API cn_layer cn_network_layer(const cn_network* net);
CN_API cn_status cn_network_to_edges_csv(const cn_network* net, char** out_csv);
CN_API cn_status cn_network_to_adjacency_csv(const cn_network* net, char** out_csv);

/* ---- metrics --------------------------------------------------------- */

CN_API cn_status cn_metrics_report(const cn_network* net, cn_format format, char** out);
CN_API cn_status cn_metrics_density(const cn_network* net, double* out);
/* id,degree,betweenness,closeness,eigenvector per node. */
CN_API cn_status cn_centrality_csv(const cn_network* net, char** out_csv);

/* ---- homophily ------------------------------------------------------- */

/* One E-I row per attribute; attributes with no usable tie are skipped when
 * skip_degenerate is non-zero, otherwise they fail the call. */
CN_API cn_status cn_homophily_report(const cn_network* net, const cn_roster* roster,
                                     const char* const* attributes, size_t attribute_count,
                                     size_t permutations, uint64_t seed, int skip_degenerate,
                                     char** out_csv);

/* ---- regression ------------------------------------------------------ */

CN_API cn_status cn_dyads_build(const cn_network* net, const cn_roster* roster,
                                const char* const* covariates, size_t covariate_count,
                                cn_ordering ordering, double distance_scale_km, cn_dyads** out);
CN_API void cn_dyads_free(cn_dyads* dyads);
CN_API size_t cn_dyads_row_count(const cn_dyads* dyads);
CN_API size_t cn_dyads_dropped(const cn_dyads* dyads);
CN_API cn_status cn_dyads_to_csv(const cn_dyads* dyads, char** out_csv);

/* Intercept plus the listed covariates; an empty list fits the intercept only. */
CN_API cn_status cn_fit_logistic(const cn_dyads* dyads, const char* const* include,
                                 size_t include_count, cn_fit** out);
CN_API void cn_fit_free(cn_fit* fit);
CN_API int cn_fit_converged(const cn_fit* fit);
CN_API size_t cn_fit_parameter_count(const cn_fit* fit);
CN_API cn_status cn_fit_coefficient(const cn_fit* fit, const char* name, double* estimate,
                                    double* std_error);
CN_API cn_status cn_fit_statistics(const cn_fit* fit, double* log_likelihood, double* deviance,
                                   double* aic, double* bic, size_t* n_obs);
CN_API cn_status cn_fit_to_csv(const cn_fit* fit, char** out_csv);
/* Fig-7 style curve; every fitted covariate except distance needs a fixed
 * value. */
CN_API cn_status cn_fit_curve(const cn_fit* fit, const double* grid_km, size_t grid_count,
                              const char* const* fixed_names, const double* fixed_values,
                              size_t fixed_count, char** out_csv);

/* ---- communities ----------------------------------------------------- */

CN_API cn_status cn_walktrap(const cn_network* net, int walk_length, cn_partition** out);
CN_API cn_status cn_partition_load(const char* path, char delimiter, cn_partition** out);
CN_API void cn_partition_free(cn_partition* partition);
CN_API size_t cn_partition_community_count(const cn_partition* partition);
CN_API double cn_partition_modularity(const cn_partition* partition);
CN_API cn_status cn_modularity(const cn_network* net, const cn_partition* partition,
                               double* out);
CN_API cn_status cn_partition_to_csv(const cn_partition* partition, char** out_csv);
CN_API cn_status cn_partition_summary_csv(const cn_partition* partition, char** out_csv);
CN_API cn_status cn_partition_merges_csv(const cn_partition* partition, char** out_csv);

/* ---- permutation tests ----------------------------------------------- */

typedef struct {
  cn_statistic statistic;
  size_t permutations;
  uint64_t seed;
  cn_alternative alternative;
  cn_pooling pooling;
  size_t histogram_bins;
} cn_permtest_options;

CN_API void cn_permtest_options_init(cn_permtest_options* options);
CN_API cn_status cn_permtest(const cn_partition* partition, const cn_roster* roster,
                             const cn_permtest_options* options, char** summary_csv,
                             char** histogram_csv, double* p_value);

/* ---- synthetic data -------------------------------------------------- */

/* spec_json NULL selects the bundled demo specification. */
CN_API cn_status cn_synth_dyadic(const char* spec_json, cn_roster** roster, cn_network** net);
/* JSON of the bundled demo specification, accepted by cn_synth_dyadic. */
CN_API cn_status cn_synth_demo_spec(char** out_json);
CN_API cn_status cn_synth_planted(const char* spec_json, cn_roster** roster, cn_network** net,
                                  cn_partition** truth);

/* ---- published-value fixtures ---------------------------------------- */

CN_API cn_status cn_fixtures_verify(const char* path, char** out_csv, size_t* failures);

#ifdef __cplusplus
}
#endif

#endif /* COLLABNET_H */
