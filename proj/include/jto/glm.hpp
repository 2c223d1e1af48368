#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jto/types.hpp"

namespace jto::glm {

struct SummaryStats {
  std::size_t n = 0;
  double min = 0, max = 0, mean = 0;
  double sd = 0;  // n - 1 denominator; 0 when n < 2
};

SummaryStats summarize(std::span<const double> values);

struct DescriptiveRow {
  std::string variable;
  bool binary = false;
  std::size_t n = 0;
  double min = 0, max = 0;
  double mean_or_percent = 0;  // percentage of the 1-coded level for binary rows
  std::optional<double> sd;    // absent for binary rows
};

// Gender, age, race, marital status, education, journey and sales-distance rows.
// Variables missing on a case are skipped for that row only.
std::vector<DescriptiveRow> descriptives(std::span<const OverdoseCase> cases);

struct DispersionResult {
  double mean = 0;
  double variance = 0;
  double ratio = 0;
  bool overdispersed = false;
};

inline constexpr double kOverdispersionThreshold = 1.5;

// ratio = sample variance / sample mean. Throws DataError when n < 2 or the mean is 0.
DispersionResult dispersion_check(std::span<const double> y, double threshold = kOverdispersionThreshold);

// Columns: intercept, sales_distance, education, gender, age, marital, race.
struct DesignMatrix {
  std::vector<std::string> column_names;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

const std::vector<std::string>& regressor_names();

struct DesignBuild {
  DesignMatrix design;
  std::size_t dropped = 0;  // cases missing education, journey or sales distance
};

// Journey miles are rounded to the nearest integer to form the count response.
DesignBuild build_design(std::span<const OverdoseCase> cases);

inline constexpr double kVifAlarm = 10.0;

// One value per non-intercept column; +inf marks exact collinearity.
std::vector<double> vif(const DesignMatrix& design);
// Same, for a matrix holding only the non-intercept columns.
std::vector<double> vif_columns(const Eigen::MatrixXd& columns);

struct NBOptions {
  int max_outer_iterations = 50;
  double tolerance = 1e-8;
  std::optional<double> fixed_theta;
};

struct NBFit {
  std::vector<std::string> names;
  Eigen::VectorXd beta, se, z, p;
  Eigen::MatrixXd covariance;
  double theta = 0;
  double log_likelihood = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood_trace;  // after each outer iteration
};

// NB2 log likelihood, log link.
double nb_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                         double theta);
// Gradient of nb_log_likelihood in beta.
Eigen::VectorXd nb_score(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                         double theta);

// Alternates IRLS for beta at fixed theta with a profile-likelihood Newton step
// in log theta. Throws DataError for a non-count response and NumericError when
// the weighted normal equations are rank deficient. Non-convergence is reported
// through NBFit::converged.
NBFit nb_fit(const DesignMatrix& design, const NBOptions& options = {});

double effect_percent(double b);
double sd_effect_percent(double b, double sd);

struct CoefficientRow {
  std::string variable;
  double b = 0, se = 0, z = 0, p = 0;
  double effect_percent = 0;
  std::optional<double> sd_effect_percent;
};

// z = b / se, two-sided Wald p, and effect sizes; sds[i] scales row i when present.
std::vector<CoefficientRow> coefficient_table(std::span<const std::string> names, std::span<const double> b,
                                              std::span<const double> se,
                                              std::span<const std::optional<double>> sds);

double two_sided_p(double z);

struct DecayProfile {
  double bin_width = 0;
  std::size_t zero_count = 0;          // at-residence journeys
  std::vector<std::size_t> counts;     // bin k covers (k * w, (k + 1) * w]
  std::optional<std::size_t> modal_bin;
  bool buffer_zone_detected = false;
  std::optional<double> decay_rate;    // per mile
};

// Throws ConfigError when bin_width <= 0.
DecayProfile decay_profile(std::span<const double> journeys, double bin_width);

}  // namespace jto::glm
