#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "jto/error.hpp"
#include "jto/geo.hpp"
#include "jto/synth.hpp"

using namespace jto;

namespace {

synth::SyntheticConfig small_config(std::uint64_t seed) {
  synth::SyntheticConfig cfg;
  cfg.seed = seed;
  cfg.n_cases = 300;
  cfg.network.n_persons = 400;
  cfg.network.n_events = 800;
  cfg.network.n_prolific = 12;
  return cfg;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

}  // namespace

TEST_CASE("same seed gives identical datasets") {
  const auto a = synth::generate_synthetic(small_config(5));
  const auto b = synth::generate_synthetic(small_config(5));
  CHECK(a.cases == b.cases);
  CHECK(a.events == b.events);
  CHECK(a.persons == b.persons);
  CHECK(a.intended_prolific == b.intended_prolific);
  const auto c = synth::generate_synthetic(small_config(6));
  CHECK_FALSE(a.cases == c.cases);
}

TEST_CASE("invalid configurations are rejected") {
  auto cfg = small_config(1);
  cfg.theta = 0;
  CHECK_THROWS_AS(synth::validate(cfg), ConfigError);
  cfg = small_config(1);
  cfg.marginals.male = 1.5;
  CHECK_THROWS_AS(synth::generate_synthetic(cfg), ConfigError);
}

TEST_CASE("male share follows the configured proportion") {
  synth::SyntheticConfig cfg;
  cfg.n_cases = 10000;
  cfg.seed = 2;
  const auto data = synth::generate_synthetic(cfg);
  const auto males = std::count_if(data.cases.begin(), data.cases.end(), [](auto& c) { return c.sex == Sex::male; });
  CHECK(std::abs(100.0 * males / 10000.0 - 64.10) <= 2.0);
}

TEST_CASE("exact marginals give the calibrated 64.10% male share") {
  synth::SyntheticConfig cfg;
  cfg.exact_marginals = true;
  const auto data = synth::generate_synthetic(cfg);
  const auto males = std::count_if(data.cases.begin(), data.cases.end(), [](auto& c) { return c.sex == Sex::male; });
  CHECK(data.cases.size() == 195);
  CHECK(100.0 * males / 195.0 == doctest::Approx(64.10).epsilon(1e-3));
}

TEST_CASE("intercept-only response mean matches exp(beta0)") {
  synth::SyntheticConfig cfg;
  cfg.n_cases = 10000;
  cfg.seed = 4;
  cfg.beta = {1.0, 0, 0, 0, 0, 0, 0};
  cfg.theta = 1.5;
  const auto data = synth::generate_synthetic(cfg);
  double sum = 0;
  for (const auto& c : data.cases) sum += *c.journey_miles;
  CHECK(std::abs(sum / 10000.0 / std::exp(1.0) - 1.0) < 0.05);
}

TEST_CASE("coordinates reproduce the generated distances") {
  const auto data = synth::generate_synthetic(small_config(9));
  for (auto c : data.cases) {
    geo::resolve_locations(c, data.gazetteer);
    const double d = geo::haversine_miles(*resolved(c.residence), *resolved(c.death_location));
    CHECK(d == doctest::Approx(*c.journey_miles).epsilon(1e-9).scale(1.0));
    const double s = geo::nearest_sales_distance(*resolved(c.death_location), data.sales_points);
    CHECK(s == doctest::Approx(*c.sales_distance_miles).epsilon(1e-12));
  }
}

TEST_CASE("some residences are address-only and in the gazetteer") {
  const auto data = synth::generate_synthetic(small_config(10));
  std::size_t text = 0;
  for (const auto& c : data.cases)
    if (auto* s = std::get_if<std::string>(&c.residence)) {
      ++text;
      CHECK(data.gazetteer.find(*s).has_value());
    }
  CHECK(text > 0);
}

TEST_CASE("max_journey_miles bounds responses") {
  auto cfg = small_config(12);
  cfg.max_journey_miles = 20;
  for (const auto& c : synth::generate_synthetic(cfg).cases) CHECK(*c.journey_miles <= 20);
}

TEST_CASE("calibrated fixture matches the target descriptive table") {
  const auto data = synth::calibrated_fixture();
  REQUIRE(data.cases.size() == 195);
  std::vector<double> jto, sales, age, edu;
  std::size_t male = 0, black = 0, married = 0, zeros = 0;
  for (const auto& c : data.cases) {
    jto.push_back(*c.journey_miles);
    sales.push_back(*c.sales_distance_miles);
    age.push_back(c.age);
    if (c.education) edu.push_back(*c.education);
    male += c.sex == Sex::male;
    black += c.race == Race::black;
    married += c.marital == Marital::married;
    zeros += *c.journey_miles == 0.0;
  }
  CHECK(male == 125);
  CHECK(black == 32);
  CHECK(married == 31);
  CHECK(zeros == 91);
  CHECK(*std::max_element(jto.begin(), jto.end()) == doctest::Approx(58.10));
  CHECK(mean_of(jto) == doctest::Approx(5.818).epsilon(1e-6));
  CHECK(sd_of(jto) == doctest::Approx(10.685).epsilon(1e-6));
  CHECK(*std::max_element(sales.begin(), sales.end()) == doctest::Approx(5.43));
  CHECK(mean_of(sales) == doctest::Approx(0.756).epsilon(1e-6));
  CHECK(sd_of(sales) == doctest::Approx(1.27).epsilon(1e-6));
  CHECK(mean_of(age) == doctest::Approx(41.76).epsilon(1e-3));
  CHECK(std::abs(sd_of(age) - 12.1) < 0.01);
  CHECK(edu.size() == 195);
  CHECK(std::abs(mean_of(edu) - 3.010) < 0.001);
  CHECK(std::abs(sd_of(edu) - 1.167) < 0.002);
  CHECK(data.intended_prolific.size() == 147);
}

TEST_CASE("moment-matched sample hits its targets") {
  const auto v = synth::moment_matched_sample(100, 30, 0.0, 40.0, 4.0, 6.0, 0.1);
  REQUIRE(v.size() == 100);
  CHECK(std::count(v.begin(), v.end(), 0.0) == 30);
  CHECK(*std::max_element(v.begin(), v.end()) == doctest::Approx(40.0));
  CHECK(mean_of(v) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(sd_of(v) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK_THROWS_AS(synth::moment_matched_sample(10, 2, 0.0, 1.0, 5.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("integer moment sample") {
  const auto v = synth::integer_moment_sample(195, 19, 83, 41.76, 12.1);
  std::vector<double> d(v.begin(), v.end());
  CHECK(*std::min_element(v.begin(), v.end()) == 19);
  CHECK(*std::max_element(v.begin(), v.end()) == 83);
  CHECK(std::accumulate(v.begin(), v.end(), 0) == static_cast<int>(std::lround(41.76 * 195)));
  CHECK(std::abs(sd_of(d) - 12.1) < 0.01);
}
