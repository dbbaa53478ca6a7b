#include "collabnet/permtest.hpp"

#include <algorithm>
#include <cmath>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/geo.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/random.hpp"

namespace collabnet {

std::string_view to_string(Statistic s) {
  return s == Statistic::mean_intra_distance ? "mean_intra_distance" : "same_country_share";
}

Statistic parse_statistic(std::string_view text) {
  if (text == "mean_intra_distance" || text == "distance") return Statistic::mean_intra_distance;
  if (text == "same_country_share" || text == "country") return Statistic::same_country_share;
  throw Error(ErrorCode::config, "unknown statistic '" + std::string(text) + "'");
}

std::string_view to_string(Alternative a) { return a == Alternative::less ? "less" : "greater"; }

Alternative parse_alternative(std::string_view text) {
  if (text == "less") return Alternative::less;
  if (text == "greater") return Alternative::greater;
  throw Error(ErrorCode::config, "unknown direction '" + std::string(text) + "'");
}

std::string_view to_string(DistancePooling p) {
  return p == DistancePooling::pooled ? "pooled" : "per_community";
}

DistancePooling parse_pooling(std::string_view text) {
  if (text == "pooled") return DistancePooling::pooled;
  if (text == "per_community" || text == "per-community") return DistancePooling::per_community;
  throw Error(ErrorCode::config, "unknown pooling '" + std::string(text) + "'");
}

namespace {

struct Resolved {
  std::vector<std::optional<Location>> location;
  std::vector<std::optional<std::string>> country;
};

Resolved resolve(const Partition& partition, const Roster& roster) {
  Resolved r;
  r.location.resize(partition.node_ids.size());
  r.country.resize(partition.node_ids.size());
  for (std::size_t i = 0; i < partition.node_ids.size(); ++i) {
    if (const auto* person = roster.find(partition.node_ids[i])) {
      r.location[i] = person->location;
      r.country[i] = person->country_residence;
    }
  }
  return r;
}

std::vector<std::vector<std::size_t>> groups_of(const std::vector<std::size_t>& assignment) {
  std::size_t count = 0;
  for (auto c : assignment) count = std::max(count, c + 1);
  std::vector<std::vector<std::size_t>> groups(count);
  for (std::size_t i = 0; i < assignment.size(); ++i) groups[assignment[i]].push_back(i);
  return groups;
}

StatisticValue mean_distance(const std::vector<std::size_t>& assignment, const Resolved& data,
                             DistancePooling pooling) {
  StatisticValue out;
  double pooled_sum = 0.0;
  double community_means = 0.0;
  std::size_t communities = 0;
  for (const auto& members : groups_of(assignment)) {
    if (members.size() < 2) continue;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto d = haversine_km(data.location[members[a]], data.location[members[b]]);
        if (!d) {
          ++out.pairs_dropped;
          continue;
        }
        sum += *d;
        ++pairs;
      }
    }
    pooled_sum += sum;
    out.pairs_used += pairs;
    if (pairs > 0) {
      community_means += sum / static_cast<double>(pairs);
      ++communities;
    }
  }
  if (out.pairs_used == 0) {
    throw Error(ErrorCode::degenerate_input,
                "mean intra-community distance: no community pair with both locations known");
  }
  out.value = pooling == DistancePooling::pooled
                  ? pooled_sum / static_cast<double>(out.pairs_used)
                  : community_means / static_cast<double>(communities);
  return out;
}

StatisticValue same_country(const std::vector<std::size_t>& assignment, const Resolved& data) {
  StatisticValue out;
  std::size_t same = 0;
  for (const auto& members : groups_of(assignment)) {
    if (members.size() < 2) continue;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& ca = data.country[members[a]];
        const auto& cb = data.country[members[b]];
        if (!ca || !cb) {
          ++out.pairs_dropped;
          continue;
        }
        same += *ca == *cb;
        ++out.pairs_used;
      }
    }
  }
  if (out.pairs_used == 0) {
    throw Error(ErrorCode::degenerate_input,
                "same-country share: no community pair with both countries known");
  }
  out.value = static_cast<double>(same) / static_cast<double>(out.pairs_used);
  return out;
}

StatisticValue evaluate(Statistic statistic, const std::vector<std::size_t>& assignment,
                        const Resolved& data, DistancePooling pooling) {
  return statistic == Statistic::mean_intra_distance ? mean_distance(assignment, data, pooling)
                                                     : same_country(assignment, data);
}

}  // namespace

StatisticValue stat_mean_intra_distance(const Partition& partition, const Roster& roster,
                                        DistancePooling pooling) {
  return mean_distance(partition.assignment, resolve(partition, roster), pooling);
}

StatisticValue stat_same_country_share(const Partition& partition, const Roster& roster) {
  return same_country(partition.assignment, resolve(partition, roster));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::degenerate_input, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

PermTestResult permutation_test(const Partition& partition, const Roster& roster,
                                const PermTestOptions& options) {
  if (options.replicates < 1) throw Error(ErrorCode::config, "permutations must be at least 1");
  const auto data = resolve(partition, roster);

  PermTestResult result;
  result.statistic = std::string(to_string(options.statistic));
  result.replicates = options.replicates;
  result.alternative = options.alternative;
  result.seed = options.seed;
  for (auto size : partition.sizes()) result.communities_used += size > 1;
  result.observed = evaluate(options.statistic, partition.assignment, data, options.pooling).value;

  result.permuted.resize(options.replicates);
  parallel_for(options.replicates, [&](std::size_t rep) {
    Rng rng(options.seed, rep);
    auto shuffled = partition.assignment;
    rng.shuffle(std::span<std::size_t>(shuffled));
    result.permuted[rep] = evaluate(options.statistic, shuffled, data, options.pooling).value;
  });

  double mean = 0.0;
  for (double v : result.permuted) mean += v;
  mean /= static_cast<double>(result.permuted.size());
  double var = 0.0;
  for (double v : result.permuted) var += (v - mean) * (v - mean);
  result.permuted_mean = mean;
  result.permuted_sd =
      result.permuted.size() > 1 ? std::sqrt(var / static_cast<double>(result.permuted.size() - 1))
                                 : 0.0;
  result.interval_low = quantile(result.permuted, 0.025);
  result.interval_high = quantile(result.permuted, 0.975);

  std::size_t extreme = 0;
  for (double v : result.permuted) {
    extreme += options.alternative == Alternative::less ? v <= result.observed : v >= result.observed;
  }
  result.p_value = static_cast<double>(1 + extreme) / static_cast<double>(options.replicates + 1);
  return result;
}

Histogram PermTestResult::histogram(std::size_t bins) const {
  Histogram h;
  bins = std::max<std::size_t>(bins, 1);
  double lo = observed, hi = observed;
  for (double v : permuted) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) bins = 1;
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 0.0;
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges.push_back(b == bins ? (hi > lo ? hi : lo) : lo + width * static_cast<double>(b));
  }
  h.counts.assign(bins, 0);
  for (double v : permuted) {
    auto b = width > 0 ? static_cast<std::size_t>((v - lo) / width) : 0;
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

std::string PermTestResult::summary_csv() const {
  using csv::format_number;
  std::string out;
  csv::append_row(out, {"statistic", "observed", "replicates", "permuted_mean", "permuted_sd",
                        "interval_low", "interval_high", "p_value", "alternative", "seed",
                        "communities_used"});
  csv::append_row(out, {statistic, format_number(observed), std::to_string(replicates),
                        format_number(permuted_mean), format_number(permuted_sd),
                        format_number(interval_low), format_number(interval_high),
                        format_number(p_value), std::string(to_string(alternative)),
                        std::to_string(seed), std::to_string(communities_used)});
  return out;
}

std::string PermTestResult::histogram_csv(std::size_t bins) const {
  using csv::format_number;
  const auto h = histogram(bins);
  std::string out;
  csv::append_row(out, {"bin_low", "bin_high", "count", "observed", "interval_low",
                        "interval_high"});
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    csv::append_row(out, {format_number(h.edges[b]), format_number(h.edges[b + 1]),
                          std::to_string(h.counts[b]), format_number(observed),
                          format_number(interval_low), format_number(interval_high)});
  }
  return out;
}

}  // namespace collabnet
