#include "jto/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "jto/error.hpp"

namespace jto::glm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEtaClamp = 30.0;
constexpr double kThetaMin = 1e-4;
constexpr double kThetaMax = 1e8;

Eigen::VectorXd mean_from(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
  Eigen::VectorXd eta = x * beta;
  return eta.array().min(kEtaClamp).max(-kEtaClamp).exp();
}

double ll_terms(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double theta) {
  double ll = 0;
  const double lg_theta = std::lgamma(theta);
  const double t_log_t = theta * std::log(theta);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    ll += std::lgamma(yi + theta) - lg_theta - std::lgamma(yi + 1.0) + t_log_t + yi * std::log(mu[i]) -
          (theta + yi) * std::log(theta + mu[i]);
  }
  return ll;
}

// Derivatives of the log likelihood in t = log(theta) at fixed means.
std::pair<double, double> theta_derivatives(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double theta) {
  double g = 0, h = 0;
  const double psi = boost::math::digamma(theta);
  const double psi1 = boost::math::trigamma(theta);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    const double tm = theta + mu[i];
    if (yi > 0) {
      g += boost::math::digamma(yi + theta) - psi;
      h += boost::math::trigamma(yi + theta) - psi1;
    }
    g += std::log(theta) + 1.0 - std::log(tm) - (theta + yi) / tm;
    h += 1.0 / theta - 2.0 / tm + (theta + yi) / (tm * tm);
  }
  return {theta * g, theta * theta * h + theta * g};
}

// Maximizes the profile likelihood in log theta: Newton steps inside a
// shrinking bracket, bisecting whenever Newton is not an ascent step.
double maximize_theta(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, double theta) {
  double lo = std::log(kThetaMin), hi = std::log(kThetaMax);
  double t = std::clamp(std::log(theta), lo, hi);
  const double score_tol = 1e-10 * (1.0 + static_cast<double>(y.size()));
  for (int it = 0; it < 200; ++it) {
    const auto [g, h] = theta_derivatives(y, mu, std::exp(t));
    if (std::abs(g) < score_tol) break;
    (g > 0 ? lo : hi) = t;
    double next = 0.5 * (lo + hi);
    if (h < 0) {
      const double newton = t - g / h;
      if (newton > lo && newton < hi) next = newton;
    }
    if (std::abs(next - t) < 1e-13 || hi - lo < 1e-13) {
      t = next;
      break;
    }
    t = next;
  }
  return std::exp(t);
}

struct IrlsResult {
  Eigen::VectorXd beta;
  double ll = 0;
};

Eigen::VectorXd weighted_solve(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, const Eigen::VectorXd& z) {
  const Eigen::VectorXd sw = w.array().sqrt();
  const Eigen::MatrixXd xw = x.array().colwise() * sw.array();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) throw NumericError("rank deficient");
  return qr.solve(Eigen::VectorXd(z.array() * sw.array()));
}

// IRLS for beta at fixed theta. Starts from `mu_start` when given, otherwise
// from `beta`. Step-halving keeps the likelihood from decreasing.
IrlsResult irls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::VectorXd beta, double theta,
                const Eigen::VectorXd* mu_start) {
  Eigen::VectorXd mu = mu_start ? *mu_start : mean_from(x, beta);
  double ll = mu_start ? -kInf : ll_terms(y, mu, theta);
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd eta = mu.array().log();
    const Eigen::VectorXd w = mu.array() / (1.0 + mu.array() / theta);
    const Eigen::VectorXd z = eta.array() + (y.array() - mu.array()) / mu.array();
    Eigen::VectorXd next = weighted_solve(x, w, z);
    double next_ll = ll_terms(y, mean_from(x, next), theta);
    if (std::isfinite(ll)) {
      for (int halving = 0; halving < 40 && !(next_ll >= ll); ++halving) {
        next = 0.5 * (next + beta);
        next_ll = ll_terms(y, mean_from(x, next), theta);
      }
      if (!(next_ll >= ll)) break;
    }
    double change = 0;
    if (std::isfinite(ll))
      for (Eigen::Index j = 0; j < next.size(); ++j)
        change = std::max(change, std::abs(next[j] - beta[j]) / std::max(std::abs(beta[j]), 1.0));
    else
      change = kInf;
    beta = next;
    ll = next_ll;
    mu = mean_from(x, beta);
    if (change < 1e-12) break;
  }
  return {beta, ll};
}

void validate_design(const DesignMatrix& d) {
  const auto n = d.x.rows();
  const auto p = d.x.cols();
  if (d.y.size() != n) throw DataError("response length does not match design rows");
  if (n <= p) throw DataError("design needs more rows than columns");
  if (!d.x.allFinite()) throw DataError("design has non-finite values");
  for (Eigen::Index i = 0; i < n; ++i)
    if (d.x(i, 0) != 1.0) throw DataError("first design column must be the intercept");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double yi = d.y[i];
    if (!(yi >= 0.0) || yi != std::floor(yi) || !std::isfinite(yi))
      throw DataError("response must be nonnegative integers");
  }
}

}  // namespace

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.n = values.size();
  if (values.empty()) return s;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::vector<DescriptiveRow> descriptives(std::span<const OverdoseCase> cases) {
  if (cases.empty()) throw DataError("descriptives need at least one case");
  auto binary_row = [&](std::string name, auto&& is_one) {
    std::vector<double> v;
    for (const auto& c : cases) v.push_back(is_one(c) ? 1.0 : 0.0);
    const auto s = summarize(v);
    return DescriptiveRow{std::move(name), true, s.n, s.min, s.max, 100.0 * s.mean, std::nullopt};
  };
  auto numeric_row = [&](std::string name, auto&& get) {
    std::vector<double> v;
    for (const auto& c : cases)
      if (auto x = get(c)) v.push_back(*x);
    const auto s = summarize(v);
    return DescriptiveRow{std::move(name), false, s.n, s.min, s.max, s.mean, s.sd};
  };
  return {
      binary_row("Gender (Male = 1)", [](const OverdoseCase& c) { return c.sex == Sex::male; }),
      numeric_row("Age", [](const OverdoseCase& c) { return std::optional<double>(c.age); }),
      binary_row("Race (Black = 1)", [](const OverdoseCase& c) { return c.race == Race::black; }),
      binary_row("Marital Status (Married = 1)", [](const OverdoseCase& c) { return c.marital == Marital::married; }),
      numeric_row("Education",
                  [](const OverdoseCase& c) {
                    return c.education ? std::optional<double>(*c.education) : std::nullopt;
                  }),
      numeric_row("Journey to Overdose", [](const OverdoseCase& c) { return c.journey_miles; }),
      numeric_row("Overdose Location to Drug Sales Location",
                  [](const OverdoseCase& c) { return c.sales_distance_miles; }),
  };
}

DispersionResult dispersion_check(std::span<const double> y, double threshold) {
  if (y.size() < 2) throw DataError("dispersion check needs at least two observations");
  const auto s = summarize(y);
  if (s.mean == 0.0) throw DataError("degenerate response");
  DispersionResult r;
  r.mean = s.mean;
  r.variance = s.sd * s.sd;
  r.ratio = r.variance / r.mean;
  r.overdispersed = r.ratio > threshold;
  return r;
}

const std::vector<std::string>& regressor_names() {
  static const std::vector<std::string> names{"intercept", "sales_distance", "education", "gender",
                                              "age",       "marital",        "race"};
  return names;
}

DesignBuild build_design(std::span<const OverdoseCase> cases) {
  std::vector<const OverdoseCase*> usable;
  for (const auto& c : cases)
    if (c.education && c.journey_miles && c.sales_distance_miles) usable.push_back(&c);
  DesignBuild out;
  out.dropped = cases.size() - usable.size();
  auto& d = out.design;
  d.column_names = regressor_names();
  d.x.resize(static_cast<Eigen::Index>(usable.size()), 7);
  d.y.resize(static_cast<Eigen::Index>(usable.size()));
  for (std::size_t i = 0; i < usable.size(); ++i) {
    const auto& c = *usable[i];
    const auto r = static_cast<Eigen::Index>(i);
    d.x(r, 0) = 1.0;
    d.x(r, 1) = *c.sales_distance_miles;
    d.x(r, 2) = *c.education;
    d.x(r, 3) = c.sex == Sex::male ? 1.0 : 0.0;
    d.x(r, 4) = c.age;
    d.x(r, 5) = c.marital == Marital::married ? 1.0 : 0.0;
    d.x(r, 6) = c.race == Race::black ? 1.0 : 0.0;
    d.y[r] = std::round(*c.journey_miles);
  }
  return out;
}

std::vector<double> vif_columns(const Eigen::MatrixXd& columns) {
  const auto n = columns.rows();
  const auto k = columns.cols();
  std::vector<double> out;
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::MatrixXd others(n, k);
    others.col(0).setOnes();
    for (Eigen::Index c = 0, o = 1; c < k; ++c)
      if (c != j) others.col(o++) = columns.col(c);
    const Eigen::VectorXd target = columns.col(j);
    const double mean = target.mean();
    const double tss = (target.array() - mean).square().sum();
    const double scale = std::max(1.0, target.squaredNorm());
    if (tss <= 1e-12 * scale) {
      out.push_back(kInf);
      continue;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
    const Eigen::VectorXd coef = qr.solve(target);
    const double rss = (target - others * coef).squaredNorm();
    out.push_back(rss <= 1e-10 * tss ? kInf : tss / rss);
  }
  return out;
}

std::vector<double> vif(const DesignMatrix& design) {
  return vif_columns(design.x.rightCols(design.x.cols() - 1));
}

double nb_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                         double theta) {
  return ll_terms(y, mean_from(x, beta), theta);
}

Eigen::VectorXd nb_score(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                         double theta) {
  const Eigen::VectorXd mu = mean_from(x, beta);
  const Eigen::VectorXd r = (y.array() - mu.array()) / (1.0 + mu.array() / theta);
  return x.transpose() * r;
}

NBFit nb_fit(const DesignMatrix& design, const NBOptions& options) {
  validate_design(design);
  const auto& x = design.x;
  const auto& y = design.y;
  const auto p = x.cols();

  double theta;
  if (options.fixed_theta) {
    if (!(*options.fixed_theta > 0)) throw ConfigError("fixed theta must be positive");
    theta = *options.fixed_theta;
  } else {
    const double mean = y.mean();
    const double var = (y.array() - mean).square().sum() / static_cast<double>(y.size() - 1);
    theta = var > mean ? mean * mean / (var - mean) : 1e6;
    theta = std::clamp(theta, 0.01, 1e6);
  }

  NBFit fit;
  fit.names = design.column_names;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  const Eigen::VectorXd mu_start = y.array() + 0.1;
  for (int outer = 1; outer <= options.max_outer_iterations; ++outer) {
    const auto step = irls(x, y, beta, theta, outer == 1 ? &mu_start : nullptr);
    double next_theta = theta;
    if (!options.fixed_theta) {
      const Eigen::VectorXd mu = mean_from(x, step.beta);
      next_theta = maximize_theta(y, mu, theta);
      if (ll_terms(y, mu, next_theta) < ll_terms(y, mu, theta)) next_theta = theta;
    }
    double change = 0;
    for (Eigen::Index j = 0; j < p; ++j)
      change = std::max(change, std::abs(step.beta[j] - beta[j]) / std::max(std::abs(beta[j]), 1.0));
    change = std::max(change, std::abs(next_theta - theta) / theta);
    beta = step.beta;
    theta = next_theta;
    fit.iterations = outer;
    fit.log_likelihood_trace.push_back(nb_log_likelihood(x, y, beta, theta));
    if (outer > 1 && change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }

  const Eigen::VectorXd mu = mean_from(x, beta);
  const Eigen::VectorXd w = mu.array() / (1.0 + mu.array() / theta);
  const Eigen::MatrixXd info = x.transpose() * (x.array().colwise() * w.array()).matrix();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  if (ldlt.info() != Eigen::Success) throw NumericError("rank deficient");
  fit.covariance = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
  fit.beta = beta;
  fit.theta = theta;
  fit.se = fit.covariance.diagonal().array().sqrt();
  fit.z = beta.array() / fit.se.array();
  fit.p.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) fit.p[j] = two_sided_p(fit.z[j]);
  fit.log_likelihood = nb_log_likelihood(x, y, beta, theta);
  return fit;
}

double effect_percent(double b) { return std::expm1(b) * 100.0; }

double sd_effect_percent(double b, double sd) { return std::expm1(b * sd) * 100.0; }

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

std::vector<CoefficientRow> coefficient_table(std::span<const std::string> names, std::span<const double> b,
                                              std::span<const double> se,
                                              std::span<const std::optional<double>> sds) {
  if (names.size() != b.size() || b.size() != se.size() || (!sds.empty() && sds.size() != b.size()))
    throw DataError("coefficient table inputs differ in length");
  std::vector<CoefficientRow> rows;
  for (std::size_t i = 0; i < b.size(); ++i) {
    CoefficientRow r;
    r.variable = names[i];
    r.b = b[i];
    r.se = se[i];
    r.z = b[i] / se[i];
    r.p = two_sided_p(r.z);
    r.effect_percent = effect_percent(b[i]);
    if (!sds.empty() && sds[i]) r.sd_effect_percent = sd_effect_percent(b[i], *sds[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

DecayProfile decay_profile(std::span<const double> journeys, double bin_width) {
  if (!(bin_width > 0) || !std::isfinite(bin_width)) throw ConfigError("decay bin width must be positive");
  DecayProfile out;
  out.bin_width = bin_width;
  for (double d : journeys) {
    if (d < 0 || !std::isfinite(d)) throw DataError("journey distances must be finite and nonnegative");
    if (d == 0.0) {
      ++out.zero_count;
      continue;
    }
    const auto bin = static_cast<std::size_t>(std::max(0.0, std::ceil(d / bin_width) - 1.0));
    if (bin >= out.counts.size()) out.counts.resize(bin + 1, 0);
    ++out.counts[bin];
  }
  if (out.counts.empty()) return out;

  std::size_t mode = 0;
  for (std::size_t k = 1; k < out.counts.size(); ++k)
    if (out.counts[k] > out.counts[mode]) mode = k;
  out.modal_bin = mode;
  out.buffer_zone_detected = mode > 0;

  std::vector<double> xs, ys;
  for (std::size_t k = mode; k < out.counts.size(); ++k) {
    if (out.counts[k] == 0) continue;
    xs.push_back((static_cast<double>(k) + 0.5) * bin_width);
    ys.push_back(std::log(static_cast<double>(out.counts[k])));
  }
  if (xs.size() >= 3) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    if (slope < 0) out.decay_rate = -slope;
  }
  return out;
}

}  // namespace jto::glm
