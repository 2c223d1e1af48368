#include "support.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace testing {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::path(JTO_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RandomGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  RandomGraph g;
  g.n = n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (u(rng) < p) {
        g.edges.emplace_back(a, b);
        g.arrest.push_back(u(rng) < 0.3);
      }
  return g;
}

std::vector<jto::CoEventRecord> graph_events(const RandomGraph& g) {
  std::vector<jto::CoEventRecord> events;
  // Every node appears at least once so isolated nodes still exist.
  for (std::size_t i = 0; i < g.n; ++i) {
    jto::CoEventRecord solo;
    solo.event_id = "S" + std::to_string(i);
    solo.type = jto::EventType::field_interview;
    solo.date = "2016-01-01";
    solo.participants = {"N" + std::to_string(i)};
    events.push_back(solo);
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    jto::CoEventRecord e;
    e.event_id = "E" + std::to_string(k);
    e.type = g.arrest[k] ? jto::EventType::arrest : jto::EventType::field_interview;
    e.date = "2016-01-02";
    e.participants = {"N" + std::to_string(g.edges[k].first), "N" + std::to_string(g.edges[k].second)};
    events.push_back(e);
    if (g.arrest[k] && k % 2 == 0) {
      // Same pair seen again at a stop; precedence keeps it arrest-sourced.
      e.event_id += "F";
      e.type = jto::EventType::field_interview;
      events.push_back(e);
    }
  }
  return events;
}

std::vector<std::vector<double>> all_pairs_hops(const RandomGraph& g) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(g.n, std::vector<double>(g.n, inf));
  for (std::size_t i = 0; i < g.n; ++i) d[i][i] = 0;
  for (auto [a, b] : g.edges) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < g.n; ++k)
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

DegreeOracle brute_force_degrees(const RandomGraph& g, const std::vector<std::size_t>& seeds, std::size_t max_degree) {
  const auto d = all_pairs_hops(g);
  DegreeOracle out;
  out.counts.assign(2, std::vector<std::size_t>(max_degree, 0));
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (auto s : seeds) best = std::min({best, d[s][g.edges[k].first], d[s][g.edges[k].second]});
    const double degree = best + 1;
    if (std::isinf(best) || degree > static_cast<double>(max_degree)) {
      ++out.excluded;
      continue;
    }
    ++out.counts[g.arrest[k] ? 0 : 1][static_cast<std::size_t>(degree) - 1];
  }
  return out;
}

double nb_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double theta) {
  double ll = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mu = std::exp(x.row(i).dot(beta));
    const double yi = y[i];
    ll += std::lgamma(yi + theta) - std::lgamma(theta) - std::lgamma(yi + 1) + theta * std::log(theta / (theta + mu)) +
          yi * std::log(mu / (theta + mu));
  }
  return ll;
}

double poisson_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  double ll = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double eta = x.row(i).dot(beta);
    ll += y[i] * eta - std::exp(eta) - std::lgamma(y[i] + 1);
  }
  return ll;
}

Eigen::VectorXd poisson_irls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  beta[0] = std::log(y.mean());
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd mu = (x * beta).array().exp();
    const Eigen::VectorXd grad = x.transpose() * (y - mu);
    const Eigen::MatrixXd info = x.transpose() * mu.asDiagonal() * x;
    const Eigen::VectorXd step = info.ldlt().solve(grad);
    beta += step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-13) break;
  }
  return beta;
}

GridSearchResult grid_search_nb(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::VectorXd beta,
                                double theta) {
  // Search over standardized covariates so the coordinates are nearly orthogonal,
  // then map back: beta_j = gamma_j / s_j, intercept absorbs the centering.
  const Eigen::Index p = x.cols();
  Eigen::VectorXd center = Eigen::VectorXd::Zero(p), scale = Eigen::VectorXd::Ones(p);
  for (Eigen::Index j = 1; j < p; ++j) {
    center[j] = x.col(j).mean();
    const double sd = std::sqrt((x.col(j).array() - center[j]).square().mean());
    scale[j] = sd > 0 ? sd : 1.0;
  }
  Eigen::MatrixXd z = x;
  for (Eigen::Index j = 1; j < p; ++j) z.col(j) = (x.col(j).array() - center[j]) / scale[j];
  Eigen::VectorXd gamma(p);
  gamma[0] = beta[0] + beta.tail(p - 1).dot(center.tail(p - 1));
  for (Eigen::Index j = 1; j < p; ++j) gamma[j] = beta[j] * scale[j];

  double log_theta = std::log(theta);
  double best = nb_loglik(z, y, gamma, theta);
  double step = 0.25;
  for (int round = 0; round < 45; ++round, step *= 0.6) {
    for (Eigen::Index j = 0; j <= p; ++j) {
      for (int moves = 0; moves < 1000; ++moves) {
        bool moved = false;
        for (double dir : {-1.0, 1.0}) {
          Eigen::VectorXd g = gamma;
          double lt = log_theta;
          if (j < p) g[j] += dir * step;
          else lt += dir * step;
          const double ll = nb_loglik(z, y, g, std::exp(lt));
          if (ll > best) {
            best = ll;
            gamma = g;
            log_theta = lt;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
    }
  }
  Eigen::VectorXd out(p);
  for (Eigen::Index j = 1; j < p; ++j) out[j] = gamma[j] / scale[j];
  out[0] = gamma[0] - out.tail(p - 1).dot(center.tail(p - 1));
  return {out, std::exp(log_theta), nb_loglik(x, y, out, std::exp(log_theta))};
}

int draw_nb(double mu, double theta, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(theta, mu / theta);
  std::poisson_distribution<int> pois(gamma(rng));
  return pois(rng);
}

}  // namespace testing
