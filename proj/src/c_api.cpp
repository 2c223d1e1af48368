#include "jto/jto.h"

#include <cstring>
#include <memory>
#include <string>

#include "jto/error.hpp"
#include "jto/geo.hpp"
#include "jto/glm.hpp"
#include "jto/pipeline.hpp"

struct jto_pipeline {
  std::unique_ptr<jto::pipeline::Pipeline> impl;
};

struct jto_nbfit {
  jto::glm::NBFit fit;
};

namespace {

thread_local std::string last_error;

jto_status fail(jto_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class F>
jto_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return JTO_OK;
  } catch (const jto::Error& e) {
    switch (e.kind()) {
      case jto::ErrorKind::config: return fail(JTO_ERR_CONFIG, e.what());
      case jto::ErrorKind::data: return fail(JTO_ERR_DATA, e.what());
      case jto::ErrorKind::numeric: return fail(JTO_ERR_NUMERIC, e.what());
    }
    return fail(JTO_ERR_INTERNAL, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(JTO_ERR_CONFIG, std::string("invalid configuration JSON: ") + e.what());
  } catch (const std::exception& e) {
    return fail(JTO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(JTO_ERR_INTERNAL, "unknown error");
  }
}

void copy_vector(const Eigen::VectorXd& v, double* dst) {
  if (dst) std::memcpy(dst, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
}

}  // namespace

extern "C" {

const char* jto_last_error(void) { return last_error.c_str(); }

const char* jto_version(void) { return "0.1.0"; }

jto_status jto_pipeline_create(const char* config_json, const char* out_dir, jto_pipeline** out) {
  if (!config_json || !out) return fail(JTO_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto j = nlohmann::json::parse(config_json);
    if (out_dir) j["out"] = out_dir;
    auto config = jto::pipeline::PipelineConfig::from_json(j);
    auto p = std::make_unique<jto_pipeline>();
    p->impl = std::make_unique<jto::pipeline::Pipeline>(std::move(config));
    *out = p.release();
  });
}

void jto_pipeline_destroy(jto_pipeline* p) { delete p; }

jto_status jto_pipeline_run(jto_pipeline* p) {
  if (!p) return fail(JTO_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] { p->impl->run(); });
}

jto_status jto_pipeline_run_stage(jto_pipeline* p, const char* stage) {
  if (!p || !stage) return fail(JTO_ERR_INVALID_ARGUMENT, "null argument");
  const auto s = jto::pipeline::parse_stage(stage);
  if (!s) return fail(JTO_ERR_INVALID_ARGUMENT, std::string("unknown stage ") + stage);
  return guarded([&] { p->impl->run_stage(*s); });
}

size_t jto_pipeline_warning_count(const jto_pipeline* p) { return p ? p->impl->warnings().size() : 0; }

const char* jto_pipeline_warning(const jto_pipeline* p, size_t i) {
  if (!p || i >= p->impl->warnings().size()) return nullptr;
  return p->impl->warnings()[i].c_str();
}

double jto_haversine_miles(double lat1, double lon1, double lat2, double lon2) {
  return jto::geo::haversine_miles({lat1, lon1}, {lat2, lon2});
}

double jto_effect_percent(double b) { return jto::glm::effect_percent(b); }

double jto_sd_effect_percent(double b, double sd) { return jto::glm::sd_effect_percent(b, sd); }

jto_status jto_dispersion_check(const double* y, size_t n, jto_dispersion* out) {
  if ((!y && n > 0) || !out) return fail(JTO_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto r = jto::glm::dispersion_check(std::span<const double>(y, n));
    *out = {r.mean, r.variance, r.ratio, r.overdispersed ? 1 : 0};
  });
}

jto_nb_options jto_nb_default_options(void) {
  const jto::glm::NBOptions d;
  return {d.max_outer_iterations, d.tolerance, 0.0};
}

jto_status jto_nb_fit(const double* x, const double* y, size_t n_rows, size_t n_cols, const jto_nb_options* options,
                      jto_nbfit** out) {
  if (!x || !y || !out) return fail(JTO_ERR_INVALID_ARGUMENT, "null argument");
  if (n_rows == 0 || n_cols == 0) return fail(JTO_ERR_INVALID_ARGUMENT, "empty design");
  *out = nullptr;
  return guarded([&] {
    jto::glm::DesignMatrix design;
    design.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        x, static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
    design.y = Eigen::Map<const Eigen::VectorXd>(y, static_cast<Eigen::Index>(n_rows));
    for (size_t j = 0; j < n_cols; ++j) design.column_names.push_back(j == 0 ? "intercept" : "x" + std::to_string(j));
    jto::glm::NBOptions opts;
    if (options) {
      opts.max_outer_iterations = options->max_outer_iterations;
      opts.tolerance = options->tolerance;
      if (options->fixed_theta > 0) opts.fixed_theta = options->fixed_theta;
    }
    auto fit = std::make_unique<jto_nbfit>();
    fit->fit = jto::glm::nb_fit(design, opts);
    *out = fit.release();
  });
}

void jto_nbfit_destroy(jto_nbfit* fit) { delete fit; }

size_t jto_nbfit_size(const jto_nbfit* fit) { return fit ? static_cast<size_t>(fit->fit.beta.size()) : 0; }

void jto_nbfit_beta(const jto_nbfit* fit, double* dst) { if (fit) copy_vector(fit->fit.beta, dst); }
void jto_nbfit_se(const jto_nbfit* fit, double* dst) { if (fit) copy_vector(fit->fit.se, dst); }
void jto_nbfit_z(const jto_nbfit* fit, double* dst) { if (fit) copy_vector(fit->fit.z, dst); }
void jto_nbfit_p(const jto_nbfit* fit, double* dst) { if (fit) copy_vector(fit->fit.p, dst); }

double jto_nbfit_theta(const jto_nbfit* fit) { return fit ? fit->fit.theta : 0.0; }
double jto_nbfit_log_likelihood(const jto_nbfit* fit) { return fit ? fit->fit.log_likelihood : 0.0; }
int jto_nbfit_iterations(const jto_nbfit* fit) { return fit ? fit->fit.iterations : 0; }
int jto_nbfit_converged(const jto_nbfit* fit) { return fit ? (fit->fit.converged ? 1 : 0) : 0; }

}  // extern "C"
