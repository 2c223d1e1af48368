#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jto/geo.hpp"
#include "jto/types.hpp"

namespace jto::synth {

// Regressor order shared with the design matrix: intercept, sales distance,
// education, gender (male = 1), age, marital (married = 1), race (black = 1).
inline constexpr std::size_t kCoefficientCount = 7;
using Coefficients = std::array<double, kCoefficientCount>;

// Descriptive targets of the reference sample (195 victims).
struct CovariateMarginals {
  double male = 0.641;
  double black = 0.1641;
  double married = 0.159;
  double age_mean = 41.76;
  double age_sd = 12.1;
  int age_min = 19;
  int age_max = 83;
  // Relative weights for education levels 1..7.
  std::array<double, 7> education_weights{12, 53, 78, 24, 13, 6, 0};
  double sales_mean = 0.756;
  double sales_max = 5.43;
};

struct NetworkShape {
  int n_persons = 1500;
  int n_prolific = 40;
  double prolific_gang_share = 32.0 / 147.0;
  double other_gang_share = 0.02;
  int n_events = 4000;
  double fir_share = 23025.0 / 28096.0;
  double drug_share = 0.06;
  int n_hotspots = 12;
  double hotspot_spread_miles = 0.35;
  GeoPoint region_center{39.1620, -84.5380};
  double region_radius_miles = 9.0;
};

struct SyntheticConfig {
  std::size_t n_cases = 195;
  Coefficients beta{3.601, -0.245, 0.304, -0.017, -0.064, -0.578, -0.589};
  double theta = 0.5;
  CovariateMarginals marginals;
  std::uint64_t seed = 1;
  NetworkShape network;
  double address_only_share = 0.1;
  // Allocate binary covariates as exactly round(p * n) ones instead of Bernoulli draws.
  bool exact_marginals = false;
  // Redraw responses above this bound.
  std::optional<int> max_journey_miles;
};

// Throws ConfigError on an invalid configuration.
void validate(const SyntheticConfig& config);

struct SyntheticData {
  std::vector<OverdoseCase> cases;
  std::vector<PersonRecord> persons;
  std::vector<CoEventRecord> events;
  geo::Gazetteer gazetteer;
  // Ground truth the generator used; pipeline outputs are compared against these.
  std::vector<std::string> intended_prolific;
  std::vector<GeoPoint> sales_points;
};

// Deterministic in (config, seed). Cases carry the generated journey and the
// sales-distance regressor in journey_miles / sales_distance_miles; the
// coordinates reproduce both values to floating-point accuracy.
SyntheticData generate_synthetic(const SyntheticConfig& config);

// Fixed calibration dataset: 28,096 co-offending
// relationships (5,071 arrest / 23,025 field-interview sourced), 1,742
// drug-related, 147 prolific sellers of whom 32 are gang members, and 195
// victims whose descriptive statistics match the target summary table.
SyntheticData calibrated_fixture();

// n values with `n_at_min` copies of lo, one copy of hi, and m interior values
// lo + floor + c * u_i^k chosen so the sample mean and standard deviation (n-1)
// equal the targets. Throws ConfigError when the targets are infeasible.
std::vector<double> moment_matched_sample(std::size_t n, std::size_t n_at_min, double lo, double hi,
                                          double mean, double sd, double interior_floor);

// Integer sample on [lo, hi] containing both bounds, with sum round(mean * n)
// and standard deviation as close to sd as integer rounding allows.
std::vector<int> integer_moment_sample(std::size_t n, int lo, int hi, double mean, double sd);

}  // namespace jto::synth
