#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "prv/datagen.hpp"
#include "prv/error.hpp"
#include "prv/normal.hpp"
#include "prv/rng.hpp"

using namespace prv;

namespace {

// Plackett's identity: dPhi2/drho = phi2, so Phi2(a,b;rho) = Phi(a)Phi(b) + int_0^rho phi2(a,b;r) dr.
double plackett_cdf(double a, double b, double rho) {
  const auto density = [&](double r) {
    const double s = 1.0 - r * r;
    return std::exp(-(a * a - 2.0 * r * a * b + b * b) / (2.0 * s)) / (2.0 * std::numbers::pi * std::sqrt(s));
  };
  const int n = 4000;
  const double h = rho / n;
  double acc = density(0.0) + density(rho);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * density(k * h);
  return normal_cdf(a) * normal_cdf(b) + acc * h / 3.0;
}

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(two_sided_z(0.05) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(two_sided_z(1.0) == 0.0);
  for (double p : {1e-10, 1e-4, 0.01, 0.2, 0.5, 0.7, 0.99, 1 - 1e-9}) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-9 * std::max(p, 1e-3));
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK_THROWS_AS(normal_quantile(1.5), Error);
}

TEST_CASE("quartile cuts") {
  const auto cuts = quantile_cuts(4);
  REQUIRE(cuts.size() == 3);
  CHECK(cuts[0] == doctest::Approx(-0.6744897501960817).epsilon(1e-14));
  CHECK(cuts[1] == 0.0);
  CHECK(cuts[2] == doctest::Approx(0.6744897501960817).epsilon(1e-14));
}

TEST_CASE("bvn_cdf against the Plackett identity") {
  for (double rho : {-0.95, -0.6, -0.2, 0.0, 0.3, 0.8, 0.95}) {
    for (double a : {-2.5, -0.67, 0.0, 0.4, 1.7}) {
      for (double b : {-1.3, 0.0, 0.67, 2.2}) {
        CHECK(std::abs(bvn_cdf(a, b, rho) - plackett_cdf(a, b, rho)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("bvn_cdf limits") {
  CHECK(bvn_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(bvn_cdf(0.0, 0.0, 0.5) == doctest::Approx(0.25 + std::asin(0.5) / (2 * std::numbers::pi)).epsilon(1e-12));
  CHECK(bvn_cdf(0.3, 1.1, 1.0) == doctest::Approx(normal_cdf(0.3)).epsilon(1e-14));
  CHECK(bvn_cdf(0.3, 1.1, -1.0) == doctest::Approx(std::max(0.0, normal_cdf(0.3) - normal_cdf(-1.1))).epsilon(1e-14));
  CHECK(bvn_cdf(INFINITY, 0.4, 0.3) == doctest::Approx(normal_cdf(0.4)).epsilon(1e-14));
  CHECK(bvn_cdf(-INFINITY, 0.4, 0.3) == 0.0);
  CHECK_THROWS_AS(bvn_cdf(0, 0, 1.01), Error);
}

TEST_CASE("bvn_table printed cells") {
  const auto zero = bvn_table(BvnSpec{0.0});
  CHECK((zero.matrix().array() - 0.0625).abs().maxCoeff() <= 1e-12);

  const auto p = bvn_table(BvnSpec{0.8});
  CHECK(std::abs(p(0, 0) - 0.1691) <= 5e-5);
  CHECK(std::abs(p(0, 3) - 0.0016) <= 5e-5);

  const auto one = bvn_table(BvnSpec{1.0});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(one(i, j) == doctest::Approx(i == j ? 0.25 : 0.0).epsilon(1e-12));
}

TEST_CASE("bvn_table invariants") {
  for (double rho : {-1.0, -0.8, -0.35, 0.1, 0.4, 0.6, 0.99, 1.0}) {
    const auto p = bvn_table(BvnSpec{rho});
    const auto flipped = bvn_table(BvnSpec{-rho});
    CHECK(std::abs(p.matrix().sum() - 1.0) <= 1e-9);
    CHECK((p.row_marginals().array() - 0.25).abs().maxCoeff() <= 1e-9);
    CHECK((p.col_marginals().array() - 0.25).abs().maxCoeff() <= 1e-9);
    CHECK((p.matrix() - p.matrix().transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((p.matrix() - flipped.matrix().colwise().reverse()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(bvn_table(BvnSpec{1.2}), Error);
  CHECK_THROWS_AS(bvn_table(BvnSpec{0.2, {0.5, 0.1}, quantile_cuts(3)}), Error);
}

TEST_CASE("bvn_table with custom cuts") {
  const auto p = bvn_table(BvnSpec{0.3, quantile_cuts(3), {-1.0, 0.5}});
  CHECK(p.rows() == 3);
  CHECK(p.cols() == 3);
  CHECK(p.col_marginals()(0) == doctest::Approx(normal_cdf(-1.0)).epsilon(1e-10));
  CHECK(p.row_marginals()(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("fixed tables") {
  const auto a = fixed_table("artificial-1a");
  CHECK(a(0, 0) == 0.005);
  CHECK(a(0, 1) == 0.125);
  CHECK(a(0, 2) == 0.370);
  const auto c = fixed_table("artificial-1c");
  CHECK(c(0, 0) == 0.0);
  CHECK(c(0, 1) == 0.0);
  CHECK(c(0, 2) == 0.5);
  const auto b = fixed_table("artificial-1b");
  CHECK(b.col_marginals()(0) == doctest::Approx(0.080).epsilon(1e-12));
  CHECK(b.col_marginals()(1) == doctest::Approx(0.150).epsilon(1e-12));
  CHECK(b.col_marginals()(2) == doctest::Approx(0.770).epsilon(1e-12));
  CHECK(is_fixed_table("artificial-1b"));
  CHECK_FALSE(is_fixed_table("cannabis"));
  try {
    fixed_table("artificial-2");
    FAIL("expected UnknownName");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownName);
  }
}

TEST_CASE("datasets") {
  CHECK(dataset("cannabis").total() == 1054);
  CHECK(dataset("occupational-1975").rows() == dataset("occupational-1985").rows());
  CHECK(is_dataset("occupational-1985"));
  CHECK_THROWS_AS(dataset("nope"), Error);
}

TEST_CASE("multinomial: n = 1 fills exactly one cell") {
  const auto p = bvn_table(BvnSpec{0.4});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto t = sample_multinomial(p, 1, seed);
    CHECK(t.total() == 1);
    CHECK((t.counts().array() == 1).count() == 1);
  }
}

TEST_CASE("multinomial: totals, determinism and zero cells") {
  const auto p = fixed_table("artificial-1c");
  const auto t1 = sample_multinomial(p, 5000, 42);
  const auto t2 = sample_multinomial(p, 5000, 42);
  CHECK(t1 == t2);
  CHECK(t1.total() == 5000);
  CHECK(t1(0, 0) == 0);
  CHECK(t1(0, 1) == 0);
  CHECK_FALSE(sample_multinomial(p, 5000, 43) == t1);
  CHECK_THROWS_AS(sample_multinomial(p, 0, 1), Error);
}

TEST_CASE("multinomial: CLT bound on a uniform 2x2 table") {
  Eigen::MatrixXd u = Eigen::MatrixXd::Constant(2, 2, 0.25);
  const ProbabilityTable p(u);
  const std::int64_t n = 1'000'000;
  const double sd = std::sqrt(0.25 * 0.75 / n);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto t = sample_multinomial(p, n, seed);
    for (Eigen::Index k = 0; k < 4; ++k) {
      const double share = static_cast<double>(t.counts()(k)) / n;
      CHECK(std::abs(share - 0.25) <= 3 * sd);
      CHECK(std::abs(share - 0.25) <= 0.002);
    }
  }
}

TEST_CASE("stream engines are distinct and reproducible") {
  auto a = stream_engine(7, 0);
  auto b = stream_engine(7, 0);
  auto c = stream_engine(7, 1);
  auto d = stream_engine(8, 0);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
  CHECK(first != d());
}

}  // TEST_SUITE
