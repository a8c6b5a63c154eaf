#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prv/table.hpp"

namespace prv {

/// k-1 standard-normal cutpoints splitting the line into k equiprobable bins.
std::vector<double> quantile_cuts(int k);

/// Standard bivariate normal (zero means, unit variances) discretized at the
/// given cutpoints. Defaults to quartile cuts on both axes (4x4).
struct BvnSpec {
  double rho = 0.0;
  std::vector<double> row_cuts = quantile_cuts(4);
  std::vector<double> col_cuts = quantile_cuts(4);
};

/// P(X <= a, Y <= b) for the standard bivariate normal with correlation rho.
double bvn_cdf(double a, double b, double rho);

/// P(a0 < X <= a1, b0 < Y <= b1); bounds may be infinite.
double bvn_rectangle(double a0, double a1, double b0, double b1, double rho);

ProbabilityTable bvn_table(const BvnSpec& spec);

/// Built-in probability tables: artificial-1a, artificial-1b, artificial-1c.
ProbabilityTable fixed_table(const std::string& name);

/// Built-in count tables: cannabis, occupational-1975, occupational-1985.
ContingencyTable dataset(const std::string& name);

bool is_fixed_table(const std::string& name);
bool is_dataset(const std::string& name);

/// Multinomial(n, vec(p)) via sequential conditional binomials over cells in
/// row-major order.
template <typename Engine>
ContingencyTable sample_multinomial(const ProbabilityTable& p, std::int64_t n, Engine& engine) {
  CountMatrix counts = CountMatrix::Zero(p.rows(), p.cols());
  std::int64_t remaining = n;
  double mass_left = 1.0;
  const Eigen::Index cells = p.rows() * p.cols();
  for (Eigen::Index k = 0; k < cells && remaining > 0; ++k) {
    const Eigen::Index i = k / p.cols();
    const Eigen::Index j = k % p.cols();
    const double pk = p(i, j);
    if (k == cells - 1) {
      counts(i, j) = remaining;
      break;
    }
    double prob = mass_left > 0.0 ? pk / mass_left : 1.0;
    prob = std::min(1.0, std::max(0.0, prob));
    std::binomial_distribution<std::int64_t> draw(remaining, prob);
    const std::int64_t x = pk > 0.0 ? draw(engine) : 0;
    counts(i, j) = x;
    remaining -= x;
    mass_left -= pk;
  }
  return ContingencyTable(std::move(counts));
}

/// Seeded convenience overload; deterministic given (p, n, seed).
ContingencyTable sample_multinomial(const ProbabilityTable& p, std::int64_t n, std::uint64_t seed);

}  // namespace prv
