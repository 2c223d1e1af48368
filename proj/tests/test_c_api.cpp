#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "jto/jto.h"
#include "support.hpp"

TEST_CASE("scalar helpers") {
  CHECK(std::abs(jto_haversine_miles(0, 0, 0, 1) - 69.095) <= 0.001);
  CHECK(std::abs(jto_effect_percent(0.304) - 35.53) <= 0.05);
  CHECK(std::abs(jto_sd_effect_percent(-0.064, 12.1) - -53.90) <= 0.05);
  CHECK(std::string(jto_version()) == "0.1.0");
}

TEST_CASE("dispersion through the C API") {
  const double y[] = {0, 1, 9, 0, 20, 2};
  jto_dispersion d{};
  REQUIRE(jto_dispersion_check(y, 6, &d) == JTO_OK);
  CHECK(d.overdispersed == 1);
  CHECK(d.ratio == doctest::Approx(d.variance / d.mean));
  CHECK(jto_dispersion_check(nullptr, 3, &d) == JTO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("nb fit handle") {
  std::mt19937_64 rng(2);
  const std::size_t n = 400;
  std::vector<double> x, y;
  std::normal_distribution<double> z(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = z(rng);
    x.push_back(1);
    x.push_back(v);
    y.push_back(testing::draw_nb(std::exp(1.0 + 0.5 * v), 2.0, rng));
  }
  jto_nbfit* fit = nullptr;
  REQUIRE(jto_nb_fit(x.data(), y.data(), n, 2, nullptr, &fit) == JTO_OK);
  REQUIRE(jto_nbfit_size(fit) == 2);
  double b[2], se[2], zz[2], p[2];
  jto_nbfit_beta(fit, b);
  jto_nbfit_se(fit, se);
  jto_nbfit_z(fit, zz);
  jto_nbfit_p(fit, p);
  CHECK(zz[1] == doctest::Approx(b[1] / se[1]));
  CHECK(std::abs(b[1] - 0.5) < 3 * se[1]);
  CHECK(jto_nbfit_theta(fit) > 0);
  CHECK(jto_nbfit_converged(fit) == 1);
  CHECK(jto_nbfit_iterations(fit) > 0);
  CHECK(std::isfinite(jto_nbfit_log_likelihood(fit)));
  jto_nbfit_destroy(fit);

  std::vector<double> bad = y;
  bad[0] = 0.5;
  CHECK(jto_nb_fit(x.data(), bad.data(), n, 2, nullptr, &fit) == JTO_ERR_DATA);
  CHECK(fit == nullptr);
  CHECK(std::string(jto_last_error()).size() > 0);
}

TEST_CASE("pipeline handle error codes") {
  jto_pipeline* p = nullptr;
  CHECK(jto_pipeline_create("{}", "/tmp/x", &p) == JTO_ERR_CONFIG);
  CHECK(p == nullptr);
  CHECK(jto_pipeline_create("{not json", "/tmp/x", &p) == JTO_ERR_CONFIG);
  CHECK(jto_pipeline_create(nullptr, "/tmp/x", &p) == JTO_ERR_INVALID_ARGUMENT);

  const auto out = testing::temp_dir("capi_pipe");
  const char* cfg = R"({"synthetic": {"n_cases": 60, "network": {"n_persons": 300, "n_events": 600, "n_prolific": 8}}})";
  REQUIRE(jto_pipeline_create(cfg, out.c_str(), &p) == JTO_OK);
  CHECK(jto_pipeline_run_stage(p, "bogus") == JTO_ERR_INVALID_ARGUMENT);
  CHECK(jto_pipeline_run_stage(p, "network") == JTO_ERR_DATA);
  CHECK(std::string(jto_last_error()).find("network: missing artifact") == 0);
  CHECK(jto_pipeline_run(p) == JTO_OK);
  CHECK(std::string(jto_last_error()).empty());
  const std::size_t w = jto_pipeline_warning_count(p);
  for (std::size_t i = 0; i < w; ++i) CHECK(jto_pipeline_warning(p, i) != nullptr);
  CHECK(jto_pipeline_warning(p, w) == nullptr);
  jto_pipeline_destroy(p);
}
