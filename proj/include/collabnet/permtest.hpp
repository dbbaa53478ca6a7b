#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collabnet/communities.hpp"
#include "collabnet/model.hpp"

namespace collabnet {

enum class Statistic { mean_intra_distance, same_country_share };
enum class DistancePooling { pooled, per_community };
enum class Alternative { less, greater };

std::string_view to_string(Statistic s);
Statistic parse_statistic(std::string_view text);
std::string_view to_string(Alternative a);
Alternative parse_alternative(std::string_view text);
std::string_view to_string(DistancePooling p);
DistancePooling parse_pooling(std::string_view text);

struct StatisticValue {
  double value = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_dropped = 0;  // a member lacks location / country
};

// Members are looked up in the roster by id. Only communities with more than
// one member contribute pairs.
StatisticValue stat_mean_intra_distance(const Partition& partition, const Roster& roster,
                                        DistancePooling pooling = DistancePooling::pooled);
StatisticValue stat_same_country_share(const Partition& partition, const Roster& roster);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
};

struct PermTestResult {
  std::string statistic;
  double observed = 0.0;
  std::size_t replicates = 0;
  double permuted_mean = 0.0;
  double permuted_sd = 0.0;
  double interval_low = 0.0;   // 2.5th percentile
  double interval_high = 0.0;  // 97.5th percentile
  double p_value = 1.0;
  Alternative alternative = Alternative::less;
  std::uint64_t seed = 0;
  std::size_t communities_used = 0;  // communities with more than one member
  std::vector<double> permuted;      // replicate values in replicate order

  Histogram histogram(std::size_t bins) const;
  std::string summary_csv() const;
  std::string histogram_csv(std::size_t bins) const;
};

struct PermTestOptions {
  Statistic statistic = Statistic::mean_intra_distance;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  Alternative alternative = Alternative::less;
  DistancePooling pooling = DistancePooling::pooled;
};

// Each replicate shuffles community labels over all partition members,
// keeping the community-size profile, and recomputes the statistic. The
// one-sided p-value is (1 + #{permuted <= observed}) / (R + 1) for `less`
// (>= for `greater`). Replicate r uses its own stream seeded from (seed, r).
PermTestResult permutation_test(const Partition& partition, const Roster& roster,
                                const PermTestOptions& options);

// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace collabnet
