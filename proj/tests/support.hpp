// Test-side oracles and fixtures. Nothing here calls into the library's
// algorithms; the oracles are written independently so they can check it.
#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jto/types.hpp"

namespace testing {

std::filesystem::path temp_dir(const std::string& name);
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Random undirected graph: node ids N0.., each pair kept with probability p.
struct RandomGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<bool> arrest;  // per edge: arrest-sourced or FIR-only
};
RandomGraph random_graph(std::size_t n, double p, std::mt19937_64& rng);
std::vector<jto::CoEventRecord> graph_events(const RandomGraph& g);

// Floyd-Warshall distances; infinity marks disconnected pairs.
std::vector<std::vector<double>> all_pairs_hops(const RandomGraph& g);

// counts[source][degree-1] with source 0 = arrest, 1 = FIR, plus edges beyond max_degree.
struct DegreeOracle {
  std::vector<std::vector<std::size_t>> counts;
  std::size_t excluded = 0;
};
DegreeOracle brute_force_degrees(const RandomGraph& g, const std::vector<std::size_t>& seeds, std::size_t max_degree);

// NB2 log likelihood through std::lgamma.
double nb_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double theta);
double poisson_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

// Newton-Raphson on the Poisson likelihood via the normal equations.
Eigen::VectorXd poisson_irls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Cyclic coordinate grid search over (beta, log theta) with shrinking step.
struct GridSearchResult {
  Eigen::VectorXd beta;
  double theta = 0;
  double loglik = 0;
};
GridSearchResult grid_search_nb(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::VectorXd beta0, double theta0);

// Gamma-Poisson draw with mean mu and size theta.
int draw_nb(double mu, double theta, std::mt19937_64& rng);

}  // namespace testing
