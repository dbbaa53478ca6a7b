#include "collabnet/regression.hpp"

#include <algorithm>
#include <cmath>

#include "collabnet/csv.hpp"
#include "collabnet/error.hpp"
#include "collabnet/geo.hpp"

namespace collabnet {

namespace {

// log(1 + exp(eta)) without overflow.
double log1p_exp(double eta) {
  return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

constexpr double kSeparationEta = 25.0;
// At a genuine optimum the Newton step left after the stopping rule fires is
// tiny; under separation the likelihood flattens while the step stays O(1).
constexpr double kDivergingStep = 1e-3;
constexpr double kZ95 = 1.959963984540054;

}  // namespace

double logistic(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

std::string_view to_string(DyadOrdering ordering) {
  return ordering == DyadOrdering::ordered ? "ordered" : "unordered";
}

DyadOrdering parse_ordering(std::string_view text) {
  if (text == "ordered") return DyadOrdering::ordered;
  if (text == "unordered") return DyadOrdering::unordered;
  throw Error(ErrorCode::config,
              "unknown dyad ordering '" + std::string(text) + "' (expected ordered or unordered)");
}

DyadTable build_dyads(const Network& net, const Roster& roster,
                      const std::vector<std::string>& covariates,
                      std::optional<DyadOrdering> ordering, double distance_scale_km) {
  if (!(distance_scale_km > 0.0) || !std::isfinite(distance_scale_km)) {
    throw Error(ErrorCode::config, "distance scale must be a positive number of km");
  }
  bool use_distance = false;
  for (const auto& c : covariates) {
    if (c == kDistanceCovariate) {
      use_distance = true;
    } else if (!is_attribute_name(c)) {
      throw Error(ErrorCode::identifier, "unknown covariate '" + c + "'");
    }
  }

  DyadTable table;
  table.ordering = ordering.value_or(net.directed() ? DyadOrdering::ordered
                                                    : DyadOrdering::unordered);
  table.node_ids = net.nodes();
  table.covariates = covariates;
  table.distance_scale_km = distance_scale_km;

  const std::size_t n = net.node_count();
  std::vector<const Researcher*> people(n, nullptr);
  for (std::size_t i = 0; i < n; ++i) people[i] = roster.find(net.node(i));

  // Per-node covariate values; nullopt marks anything missing.
  std::vector<std::vector<std::optional<std::string>>> values(
      n, std::vector<std::optional<std::string>>(covariates.size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!people[i]) continue;
    for (std::size_t c = 0; c < covariates.size(); ++c) {
      if (covariates[c] != kDistanceCovariate) values[i][c] = attribute_value(*people[i], covariates[c]);
    }
  }

  auto add_pair = [&](std::size_t i, std::size_t j) {
    ++table.candidate_pairs;
    DyadRow row;
    row.i = i;
    row.j = j;
    row.covariates.resize(covariates.size());
    if (!people[i] || !people[j]) {
      ++table.dropped_missing;
      return;
    }
    if (use_distance) {
      const auto d = haversine_km(people[i]->location, people[j]->location);
      if (!d) {
        ++table.dropped_missing;
        return;
      }
      row.distance_km = *d;
    }
    for (std::size_t c = 0; c < covariates.size(); ++c) {
      if (covariates[c] == kDistanceCovariate) {
        row.covariates[c] = row.distance_km / distance_scale_km;
        continue;
      }
      const auto& a = values[i][c];
      const auto& b = values[j][c];
      if (!a || !b) {
        ++table.dropped_missing;
        return;
      }
      row.covariates[c] = *a == *b ? 0.0 : 1.0;
    }
    if (table.ordering == DyadOrdering::ordered) {
      row.outcome = net.has_edge(i, j) ? 1 : 0;
    } else {
      row.outcome = (net.has_edge(i, j) || net.has_edge(j, i)) ? 1 : 0;
    }
    table.rows.push_back(std::move(row));
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (table.ordering == DyadOrdering::unordered && j < i) continue;
      add_pair(i, j);
    }
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::degenerate_input, "dyad table is empty after dropping " +
                                                 std::to_string(table.dropped_missing) +
                                                 " incomplete pairs");
  }
  return table;
}

std::string DyadTable::to_csv() const {
  std::string out;
  std::vector<std::string> header{"i", "j", "outcome", "distance_km"};
  header.insert(header.end(), covariates.begin(), covariates.end());
  csv::append_row(out, header);
  for (const auto& r : rows) {
    std::vector<std::string> fields{node_ids[r.i], node_ids[r.j], std::to_string(r.outcome),
                                    csv::format_number(r.distance_km)};
    for (double v : r.covariates) fields.push_back(csv::format_number(v));
    csv::append_row(out, fields);
  }
  return out;
}

LogisticDesign make_design(const DyadTable& table, const std::vector<std::string>& include) {
  std::vector<std::size_t> columns;
  for (const auto& name : include) {
    const auto it = std::find(table.covariates.begin(), table.covariates.end(), name);
    if (it == table.covariates.end()) {
      throw Error(ErrorCode::identifier, "covariate '" + name + "' is not in the dyad table");
    }
    columns.push_back(static_cast<std::size_t>(it - table.covariates.begin()));
  }
  LogisticDesign design;
  design.names.push_back(kInterceptName);
  design.names.insert(design.names.end(), include.begin(), include.end());
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  const auto cols = static_cast<Eigen::Index>(columns.size() + 1);
  design.x.resize(rows, cols);
  design.y.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    design.x(r, 0) = 1.0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      design.x(r, static_cast<Eigen::Index>(c + 1)) = row.covariates[columns[c]];
    }
    design.y(r) = row.outcome;
  }
  return design;
}

double log_likelihood(const LogisticDesign& design, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design.x * beta;
  double ll = 0.0;
  for (Eigen::Index r = 0; r < eta.size(); ++r) ll += design.y(r) * eta(r) - log1p_exp(eta(r));
  return ll;
}

Eigen::VectorXd score(const LogisticDesign& design, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design.x * beta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) resid(r) = design.y(r) - logistic(eta(r));
  return design.x.transpose() * resid;
}

Eigen::MatrixXd information(const LogisticDesign& design, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design.x * beta;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index r = 0; r < eta.size(); ++r) {
    const double p = logistic(eta(r));
    w(r) = p * (1.0 - p);
  }
  return design.x.transpose() * w.asDiagonal() * design.x;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

Eigen::VectorXd FitResult::estimates() const {
  Eigen::VectorXd beta(static_cast<Eigen::Index>(coefficients.size()));
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    beta(static_cast<Eigen::Index>(k)) = coefficients[k].estimate;
  }
  return beta;
}

std::optional<std::size_t> FitResult::find(std::string_view name) const {
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k].name == name) return k;
  }
  return std::nullopt;
}

FitResult fit_logistic(const LogisticDesign& input, double distance_scale_km) {
  const auto n = input.x.rows();
  if (n == 0) throw Error(ErrorCode::degenerate_input, "logistic fit on an empty table");
  const double positives = input.y.sum();
  if (positives < 1.0 || positives > static_cast<double>(n) - 1.0) {
    throw Error(ErrorCode::degenerate_input,
                "logistic fit needs at least one row of each outcome class (" +
                    std::to_string(static_cast<long long>(positives)) + " of " +
                    std::to_string(n) + " positive)");
  }

  FitResult fit;
  fit.distance_scale_km = distance_scale_km;

  // Drop covariates that do not vary; they duplicate the intercept.
  std::vector<Eigen::Index> keep{0};
  for (Eigen::Index c = 1; c < input.x.cols(); ++c) {
    const auto col = input.x.col(c);
    if (col.maxCoeff() == col.minCoeff()) {
      fit.dropped_constant.push_back(input.names[static_cast<std::size_t>(c)]);
    } else {
      keep.push_back(c);
    }
  }
  LogisticDesign design;
  design.y = input.y;
  design.x.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    design.x.col(static_cast<Eigen::Index>(k)) = input.x.col(keep[k]);
    design.names.push_back(input.names[static_cast<std::size_t>(keep[k])]);
  }
  const auto p = design.x.cols();

  // First column that adds no rank is the one to blame.
  for (Eigen::Index c = 1; c <= p; ++c) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x.leftCols(c));
    if (qr.rank() < c) {
      throw Error(ErrorCode::rank_deficient,
                  "design matrix is rank deficient: column '" +
                      design.names[static_cast<std::size_t>(c - 1)] +
                      "' is a linear combination of earlier columns");
    }
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  const double mean = positives / static_cast<double>(n);
  beta(0) = std::log(mean / (1.0 - mean));
  double ll = log_likelihood(design, beta);

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    const Eigen::VectorXd g = score(design, beta);
    const Eigen::MatrixXd h = information(design, beta);
    const Eigen::VectorXd step = h.ldlt().solve(g);
    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double ll_new = log_likelihood(design, candidate);
    // Near the optimum the log-likelihood is flat to rounding; a full Newton
    // step that loses only rounding noise is kept.
    const double noise = 1e-12 * std::max(1.0, std::abs(ll));
    for (int halving = 0; halving < 50 && !(ll_new >= ll - noise); ++halving) {
      scale /= 2.0;
      candidate = beta + scale * step;
      ll_new = log_likelihood(design, candidate);
    }
    if (!(ll_new >= ll - noise)) {
      // No ascent possible along the Newton direction: at the optimum to
      // machine precision.
      fit.iterations = iter;
      fit.converged = true;
      fit.loglik_trace.push_back(ll);
      break;
    }
    const double change = ll_new - ll;
    beta = candidate;
    ll = ll_new;
    fit.iterations = iter;
    fit.loglik_trace.push_back(ll);
    const bool settled = score(design, beta).cwiseAbs().maxCoeff() < kScoreTolerance ||
                         (scale * step).cwiseAbs().maxCoeff() <
                             1e-10 * (1.0 + beta.cwiseAbs().maxCoeff());
    if (change < kLogLikTolerance && settled) {
      fit.converged = true;
      break;
    }
  }

  const Eigen::VectorXd eta = design.x * beta;
  const double max_eta = eta.cwiseAbs().maxCoeff();
  const Eigen::VectorXd final_step =
      information(design, beta).ldlt().solve(score(design, beta));
  Eigen::Index diverging = 0;
  const double step_size = final_step.cwiseAbs().maxCoeff(&diverging);
  if (max_eta > kSeparationEta || step_size > kDivergingStep) {
    Eigen::Index saturated = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double p_hat = logistic(eta(r));
      saturated += p_hat < 1e-8 || p_hat > 1.0 - 1e-8;
    }
    throw Error(ErrorCode::separation,
                "coefficients diverge (perfect or quasi separation) along '" +
                    design.names[static_cast<std::size_t>(diverging)] + "': " +
                    std::to_string(saturated) + " of " + std::to_string(n) +
                    " fitted probabilities are within 1e-8 of 0 or 1, max |linear predictor| = " +
                    csv::format_number(max_eta));
  }

  const Eigen::MatrixXd info = information(design, beta);
  fit.covariance = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.covariance = ((fit.covariance + fit.covariance.transpose()) / 2.0).eval();
  for (Eigen::Index k = 0; k < p; ++k) {
    Coefficient c;
    c.name = design.names[static_cast<std::size_t>(k)];
    c.estimate = beta(k);
    c.std_error = std::sqrt(std::max(0.0, fit.covariance(k, k)));
    c.z = c.std_error > 0 ? c.estimate / c.std_error : 0.0;
    c.p_value = std::erfc(std::abs(c.z) / std::sqrt(2.0));
    c.stars = significance_stars(c.p_value);
    fit.coefficients.push_back(std::move(c));
  }
  fit.n_obs = static_cast<std::size_t>(n);
  fit.log_likelihood = ll;
  fit.deviance = -2.0 * ll;
  const double k = static_cast<double>(p);
  fit.aic = fit.deviance + 2.0 * k;
  fit.bic = fit.deviance + k * std::log(static_cast<double>(n));
  return fit;
}

FitResult fit_logistic(const DyadTable& table, const std::vector<std::string>& include) {
  return fit_logistic(make_design(table, include), table.distance_scale_km);
}

std::string FitResult::to_csv() const {
  using csv::format_number;
  std::string out;
  csv::append_row(out, {"term", "estimate", "std_error", "z", "p_value", "stars"});
  for (const auto& c : coefficients) {
    csv::append_row(out, {c.name, format_number(c.estimate), format_number(c.std_error),
                          format_number(c.z), format_number(c.p_value), c.stars});
  }
  csv::append_row(out, {"AIC", format_number(aic), "", "", "", ""});
  csv::append_row(out, {"BIC", format_number(bic), "", "", "", ""});
  csv::append_row(out, {"LogLikelihood", format_number(log_likelihood), "", "", "", ""});
  csv::append_row(out, {"Deviance", format_number(deviance), "", "", "", ""});
  csv::append_row(out, {"n_obs", std::to_string(n_obs), "", "", "", ""});
  csv::append_row(out, {"distance_scale_km", format_number(distance_scale_km), "", "", "", ""});
  return out;
}

std::vector<CurvePoint> predict_curve(const FitResult& fit, const std::vector<double>& grid_km,
                                      const std::map<std::string, double>& fixed) {
  if (!fit.converged) {
    throw Error(ErrorCode::non_convergence, "cannot predict from a fit that did not converge");
  }
  const auto distance_index = fit.find(kDistanceCovariate);
  if (!distance_index) {
    throw Error(ErrorCode::identifier, "fit has no 'distance' coefficient to vary");
  }
  for (const auto& [name, value] : fixed) {
    if (!fit.find(name) || name == kInterceptName || name == kDistanceCovariate) {
      throw Error(ErrorCode::identifier, "fixed covariate '" + name + "' is not a fitted term");
    }
  }
  const auto p = static_cast<Eigen::Index>(fit.coefficients.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto& name = fit.coefficients[static_cast<std::size_t>(k)].name;
    if (name == kInterceptName) {
      x(k) = 1.0;
    } else if (name != kDistanceCovariate) {
      const auto it = fixed.find(name);
      if (it == fixed.end()) {
        throw Error(ErrorCode::identifier, "no fixed value given for covariate '" + name + "'");
      }
      x(k) = it->second;
    }
  }

  const Eigen::VectorXd beta = fit.estimates();
  std::vector<CurvePoint> curve;
  curve.reserve(grid_km.size());
  for (double d : grid_km) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw Error(ErrorCode::config, "distance grid values must be finite and non-negative");
    }
    x(static_cast<Eigen::Index>(*distance_index)) = d / fit.distance_scale_km;
    const double eta = x.dot(beta);
    const double var = fit.covariance.size() == p * p ? x.dot(fit.covariance * x) : 0.0;
    const double se = std::sqrt(std::max(0.0, var));
    curve.push_back({d, logistic(eta), logistic(eta - kZ95 * se), logistic(eta + kZ95 * se)});
  }
  return curve;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out;
  csv::append_row(out, {"distance_km", "p_hat", "lo", "hi"});
  for (const auto& c : curve) {
    csv::append_row(out, {csv::format_number(c.distance_km), csv::format_number(c.p_hat),
                          csv::format_number(c.band_low), csv::format_number(c.band_high)});
  }
  return out;
}

}  // namespace collabnet
