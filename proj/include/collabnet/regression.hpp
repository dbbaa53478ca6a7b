#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collabnet/model.hpp"

namespace collabnet {

enum class DyadOrdering { ordered, unordered };

std::string_view to_string(DyadOrdering ordering);
DyadOrdering parse_ordering(std::string_view text);

inline constexpr double kDefaultDistanceScaleKm = 100.0;
inline constexpr const char* kDistanceCovariate = "distance";
inline constexpr const char* kInterceptName = "intercept";

struct DyadRow {
  std::size_t i = 0;  // indices into DyadTable::node_ids
  std::size_t j = 0;
  int outcome = 0;
  double distance_km = 0.0;        // unscaled, 0 when distance is not a covariate
  std::vector<double> covariates;  // aligned with DyadTable::covariates

  friend bool operator==(const DyadRow&, const DyadRow&) = default;
};

// One row per researcher pair. Covariate columns hold the scaled distance
// (km / distance_scale_km) and 0/1 indicators that are 0 exactly when the
// two researchers share the attribute value.
struct DyadTable {
  DyadOrdering ordering = DyadOrdering::ordered;
  std::vector<std::string> node_ids;
  std::vector<std::string> covariates;
  double distance_scale_km = kDefaultDistanceScaleKm;
  std::size_t candidate_pairs = 0;  // n(n-1) or n(n-1)/2 before drops
  std::size_t dropped_missing = 0;  // complete-case drops
  std::vector<DyadRow> rows;

  std::string to_csv() const;
};

// Covariates are "distance" and/or attribute names. Ordering defaults to
// ordered for directed layers and unordered otherwise. For unordered tables
// built from a directed layer the outcome is 1 when either direction exists.
DyadTable build_dyads(const Network& net, const Roster& roster,
                      const std::vector<std::string>& covariates,
                      std::optional<DyadOrdering> ordering = std::nullopt,
                      double distance_scale_km = kDefaultDistanceScaleKm);

// Intercept column followed by the selected covariates.
struct LogisticDesign {
  std::vector<std::string> names;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

LogisticDesign make_design(const DyadTable& table, const std::vector<std::string>& include);

double log_likelihood(const LogisticDesign& design, const Eigen::VectorXd& beta);
Eigen::VectorXd score(const LogisticDesign& design, const Eigen::VectorXd& beta);
Eigen::MatrixXd information(const LogisticDesign& design, const Eigen::VectorXd& beta);

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  std::string stars;
};

std::string significance_stars(double p_value);

struct FitResult {
  std::vector<Coefficient> coefficients;  // intercept first
  Eigen::MatrixXd covariance;
  double log_likelihood = 0.0;
  double deviance = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t n_obs = 0;
  int iterations = 0;
  bool converged = false;
  double distance_scale_km = kDefaultDistanceScaleKm;
  std::vector<std::string> dropped_constant;
  std::vector<double> loglik_trace;  // log-likelihood after each iteration

  std::size_t parameter_count() const { return coefficients.size(); }
  Eigen::VectorXd estimates() const;
  std::optional<std::size_t> find(std::string_view name) const;

  // Coefficient rows (estimate, se, z, p, stars) followed by AIC, BIC,
  // LogLikelihood, Deviance, n_obs and distance_scale_km.
  std::string to_csv() const;
};

inline constexpr int kMaxIterations = 100;
inline constexpr double kLogLikTolerance = 1e-8;
inline constexpr double kScoreTolerance = 1e-9;  // max |score| at convergence

// Maximum likelihood by iteratively reweighted least squares with step
// halving. Constant covariates are dropped and listed. Throws
// Error(rank_deficient) naming the first collinear column and
// Error(separation) when fitted probabilities reach 0 or 1.
FitResult fit_logistic(const DyadTable& table, const std::vector<std::string>& include);
FitResult fit_logistic(const LogisticDesign& design, double distance_scale_km);

struct CurvePoint {
  double distance_km = 0.0;
  double p_hat = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
};

// Probability of a tie along a distance grid with the other covariates held
// at `fixed`. The 95% band maps x'b +/- 1.96 se(x'b) through the logistic
// function, se from the delta method.
std::vector<CurvePoint> predict_curve(const FitResult& fit, const std::vector<double>& grid_km,
                                      const std::map<std::string, double>& fixed);

std::string curve_csv(const std::vector<CurvePoint>& curve);

double logistic(double eta);

}  // namespace collabnet
