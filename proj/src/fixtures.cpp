#include "collabnet/fixtures.hpp"

#include <cmath>
#include <map>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/regression.hpp"

namespace collabnet {

std::string_view to_string(FixtureStatus status) {
  switch (status) {
    case FixtureStatus::reproducible_identity: return "reproducible-identity";
    case FixtureStatus::context_only: return "context-only";
    case FixtureStatus::discrepancy: return "discrepancy";
  }
  return "context-only";
}

std::vector<PublishedValue> parse_fixtures(std::string_view text) {
  const auto table = csv::parse(text);
  const auto source = table.column("source");
  const auto quantity = table.column("quantity");
  const auto value = table.column("value");
  const auto status = table.column("status");
  const auto note = table.column("note");
  if (!source || !quantity || !value || !status || !note) {
    throw Error(ErrorCode::parse, "fixture header must be source,quantity,value,status,note");
  }
  std::vector<PublishedValue> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& row : table.rows) {
    auto field = [&](std::size_t c) { return c < row.fields.size() ? row.fields[c] : ""; };
    const auto where = "fixture line " + std::to_string(row.line);
    PublishedValue v;
    v.source = field(*source);
    v.quantity = field(*quantity);
    v.note = field(*note);
    const auto parsed = csv::parse_number(field(*value));
    if (!parsed) throw Error(ErrorCode::parse, where + ": value '" + field(*value) + "' is not numeric");
    v.value = *parsed;
    const auto s = field(*status);
    if (s == "reproducible-identity") {
      v.status = FixtureStatus::reproducible_identity;
    } else if (s == "context-only") {
      v.status = FixtureStatus::context_only;
    } else if (s == "discrepancy") {
      v.status = FixtureStatus::discrepancy;
    } else {
      throw Error(ErrorCode::parse, where + " (" + v.quantity + "): status '" + s +
                                        "' must be reproducible-identity, context-only or "
                                        "discrepancy");
    }
    if (v.quantity.empty()) throw Error(ErrorCode::parse, where + ": empty quantity");
    if (!seen.emplace(v.quantity, row.line).second) {
      throw Error(ErrorCode::parse, where + ": quantity '" + v.quantity + "' appears twice");
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<PublishedValue> load_fixtures(const std::string& path) {
  return parse_fixtures(csv::read_text(path));
}

std::size_t IdentityReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.evaluated && !c.passed;
  return n;
}

const IdentityCheck* IdentityReport::find(std::string_view quantity) const {
  for (const auto& c : checks) {
    if (c.quantity == quantity) return &c;
  }
  return nullptr;
}

std::string IdentityReport::to_csv() const {
  std::string out;
  csv::append_row(out, {"quantity", "status", "published", "computed", "result", "detail"});
  for (const auto& c : checks) {
    std::string result = "skipped";
    if (c.evaluated) {
      if (c.status == FixtureStatus::discrepancy) {
        result = c.passed ? "expected-fail" : "fail";
      } else {
        result = c.passed ? "pass" : "fail";
      }
    }
    csv::append_row(out, {c.quantity, std::string(to_string(c.status)),
                          csv::format_number(c.published),
                          c.computed ? csv::format_number(*c.computed) : "", result, c.detail});
  }
  return out;
}

namespace {

constexpr double kIdentityTolerance = 0.01;

double round2(double x) { return std::round(x * 100.0) / 100.0; }

bool same_2dp(double computed, double published) {
  return std::abs(round2(computed) - published) < 1e-9;
}

class Ledger {
 public:
  explicit Ledger(const std::vector<PublishedValue>& rows) {
    for (const auto& r : rows) values_.emplace(r.quantity, r.value);
  }

  double need(const std::string& quantity) const {
    const auto it = values_.find(quantity);
    if (it == values_.end()) {
      throw Error(ErrorCode::spec, "identity needs fixture value '" + quantity + "'");
    }
    return it->second;
  }
  std::optional<double> get(const std::string& quantity) const {
    const auto it = values_.find(quantity);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, double> values_;
};

struct Outcome {
  double computed;
  bool holds;
  std::string detail;
};

// Survey layers are directed; only the co-authorship network is not.
bool network_directed(const std::string& network) { return network != "lsil"; }

Outcome check(const Ledger& ledger, const std::string& network, const std::string& field,
              double published) {
  const auto key = [&](const std::string& f) { return network + "." + f; };
  if (field == "density") {
    const double n = ledger.need(key("nodes"));
    const double m = ledger.need(key("ties"));
    const double d = (network_directed(network) ? m : 2.0 * m) / (n * (n - 1.0));
    return {d, same_2dp(d, published),
            (network_directed(network) ? "m/(n(n-1))" : "2m/(n(n-1))") + std::string(" rounded to 2 dp")};
  }
  if (field == "avg_degree") {
    const double d = 2.0 * ledger.need(key("ties")) / ledger.need(key("nodes"));
    return {d, same_2dp(d, published), "2m/n rounded to 2 dp"};
  }
  if (field == "aic") {
    const double gap = published - ledger.need(key("deviance"));
    const double k = std::round(gap / 2.0);
    return {ledger.need(key("deviance")) + 2.0 * k, std::abs(gap - 2.0 * k) <= kIdentityTolerance,
            "AIC - deviance = 2k with k = " + csv::format_number(k)};
  }
  if (field == "bic") {
    const double dev = ledger.need(key("deviance"));
    const double k = std::round((ledger.need(key("aic")) - dev) / 2.0);
    const double expected = dev + k * std::log(ledger.need(key("n_obs")));
    return {expected, std::abs(published - expected) <= kIdentityTolerance,
            "BIC - deviance = k ln(n_obs) with k = " + csv::format_number(k)};
  }
  if (field == "loglik") {
    const double expected = -ledger.need(key("deviance")) / 2.0;
    return {expected, std::abs(-2.0 * published - ledger.need(key("deviance"))) <= kIdentityTolerance,
            "deviance = -2 logLik"};
  }
  if (field == "deviance") {
    const double expected = -2.0 * ledger.need(key("loglik"));
    return {expected, std::abs(published - expected) <= kIdentityTolerance, "deviance = -2 logLik"};
  }
  if (field == "n_obs") {
    const double n = std::round((1.0 + std::sqrt(1.0 + 4.0 * published)) / 2.0);
    const double pairs = n * (n - 1.0);
    bool holds = pairs == published;
    std::string detail = "ordered pairs n(n-1) with n = " + csv::format_number(n);
    // Survey models are fitted on the information roster.
    const auto group = network.substr(0, network.find('_'));
    if (const auto info_nodes = ledger.get(group + "_information.nodes")) {
      holds = holds && *info_nodes == n;
      detail += " (information-layer nodes " + csv::format_number(*info_nodes) + ")";
    }
    return {pairs, holds, detail};
  }
  if (field == "largest_share") {
    const double share = ledger.need(key("largest_community")) / ledger.need(key("roster_nodes"));
    return {share, same_2dp(share, published), "largest community / roster size"};
  }
  if (field == "p_same_attributes_other_employer") {
    const double p = logistic(ledger.need(key("coef.intercept")) + ledger.need(key("coef.employer")));
    return {p, std::abs(p - published) <= kIdentityTolerance,
            "logistic(intercept + employer) at zero distance"};
  }
  throw Error(ErrorCode::spec, "no identity implemented for field '" + field + "'");
}

}  // namespace

IdentityReport verify_identities(const std::vector<PublishedValue>& fixtures) {
  const Ledger ledger(fixtures);
  IdentityReport report;
  for (const auto& row : fixtures) {
    IdentityCheck c;
    c.quantity = row.quantity;
    c.status = row.status;
    c.published = row.value;
    if (row.status != FixtureStatus::context_only) {
      const auto dot = row.quantity.find('.');
      if (dot == std::string::npos) {
        throw Error(ErrorCode::spec, "fixture quantity '" + row.quantity + "' has no network prefix");
      }
      const auto outcome =
          check(ledger, row.quantity.substr(0, dot), row.quantity.substr(dot + 1), row.value);
      c.evaluated = true;
      c.computed = outcome.computed;
      c.detail = outcome.detail;
      c.passed = row.status == FixtureStatus::discrepancy ? !outcome.holds : outcome.holds;
    } else {
      c.detail = row.note;
    }
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace collabnet
