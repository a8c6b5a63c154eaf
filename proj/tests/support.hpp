#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "prv/ffamily.hpp"
#include "prv/table.hpp"

namespace prv::testing {

/// Random R x C probability table with R, C drawn from [min_dim, max_dim].
/// Cells are Exp(1) draws raised to a random power, so the corpus mixes
/// near-uniform and strongly skewed tables; `floor` bounds cells from below
/// before normalization.
inline ProbabilityTable random_table(std::mt19937_64& rng, int min_dim = 2, int max_dim = 5,
                                     double floor = 0.0) {
  std::uniform_int_distribution<int> dim(min_dim, max_dim);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> power(0.5, 3.0);
  const int rows = dim(rng);
  const int cols = dim(rng);
  const double k = power(rng);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = std::pow(expo(rng), k) + 1e-6;
  m /= m.sum();
  if (floor > 0.0) {
    m = m.array().max(floor);
    m /= m.sum();
  }
  return ProbabilityTable::normalized(m);
}

/// Random probability vector of the given length.
inline Eigen::VectorXd random_simplex(std::mt19937_64& rng, int length) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd v(length);
  for (int j = 0; j < length; ++j) v(j) = expo(rng);
  return v / v.sum();
}

/// Outer product of two random marginals: an exactly independent table.
inline ProbabilityTable random_independent_table(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 5);
  const Eigen::VectorXd r = random_simplex(rng, dim(rng));
  const Eigen::VectorXd c = random_simplex(rng, dim(rng));
  return ProbabilityTable::normalized(r * c.transpose());
}

/// Random permutation of 0..n-1.
inline std::vector<Eigen::Index> random_permutation(std::mt19937_64& rng, Eigen::Index n) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

/// The six generator settings used throughout the experiments and properties.
inline std::vector<FSpec> experiment_generators() {
  return {power_f(0.0), power_f(0.5), power_f(1.0), omega_f(0.0), omega_f(0.5), omega_f(0.9)};
}

}  // namespace prv::testing
