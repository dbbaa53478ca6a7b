#pragma once

#include <optional>
#include <string>
#include <vector>

namespace collabnet {

enum class FixtureStatus { reproducible_identity, context_only, discrepancy };

std::string_view to_string(FixtureStatus status);

// One published number. Quantities are named "<network>.<field>", e.g.
// "srg_trust.density" or "lsil.coef.employer".
struct PublishedValue {
  std::string source;
  std::string quantity;
  double value = 0.0;
  FixtureStatus status = FixtureStatus::context_only;
  std::string note;
};

// Columns source,quantity,value,status,note. Throws Error(parse) for a row
// with a missing or unknown status or a non-numeric value, and for a
// duplicated quantity.
std::vector<PublishedValue> parse_fixtures(std::string_view text);
std::vector<PublishedValue> load_fixtures(const std::string& path);

struct IdentityCheck {
  std::string quantity;
  FixtureStatus status = FixtureStatus::context_only;
  double published = 0.0;
  std::optional<double> computed;
  // reproducible-identity: the identity holds. discrepancy: it is confirmed
  // not to hold. context-only rows are not evaluated.
  bool passed = true;
  bool evaluated = false;
  std::string detail;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;

  std::size_t failures() const;
  const IdentityCheck* find(std::string_view quantity) const;
  std::string to_csv() const;
};

// Evaluates every algebraic identity derivable from published numbers alone:
// density and average degree from (n, m), AIC/BIC/deviance/log-likelihood
// relations, dyad counts as ordered pairs, community shares and the fitted
// probability quoted in the text. Throws Error(spec) when a
// reproducible-identity row has no identity implemented for its field.
IdentityReport verify_identities(const std::vector<PublishedValue>& fixtures);

}  // namespace collabnet
