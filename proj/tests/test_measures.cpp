#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "prv/datagen.hpp"
#include "prv/error.hpp"
#include "prv/measures.hpp"
#include "support.hpp"

using namespace prv;

namespace {

constexpr double kTol4 = 5e-5;

ProbabilityTable table(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return ProbabilityTable::normalized(m);
}

ProbabilityTable plant_one_hot_row(ProbabilityTable t, std::mt19937_64& rng) {
  Eigen::MatrixXd m = t.matrix();
  const Eigen::Index row = std::uniform_int_distribution<Eigen::Index>(0, m.rows() - 1)(rng);
  const Eigen::Index keep = std::uniform_int_distribution<Eigen::Index>(0, m.cols() - 1)(rng);
  const double mass = m.row(row).sum();
  m.row(row).setZero();
  m(row, keep) = mass;
  return ProbabilityTable::normalized(m);
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("variation profile basics") {
  const auto p = table({{0.25, 0.25}, {0.25, 0.25}});
  const auto v = variation_profile(p, power_f(0.0));
  CHECK(v.marginal == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(v.conditional(0) == doctest::Approx(std::numbers::ln2));

  const auto one_hot = table({{0.0, 0.5}, {0.25, 0.25}});
  CHECK(variation_profile(one_hot, power_f(0.5)).conditional(0) == 0.0);
  CHECK(variation_profile(one_hot, power_f(0.5)).has_complete_row());

  const auto c = fixed_table("artificial-1c");
  for (double lambda : {0.0, 0.5, 1.0}) CHECK(variation_profile(c, power_f(lambda)).conditional(0) == 0.0);
}

TEST_CASE("zero marginal variation is an error") {
  const auto flat = custom_f("zero", [](double) { return 0.0; }, [](double) { return 0.0; });
  try {
    phi_f(fixed_table("artificial-1a"), flat);
    FAIL("expected NonPositiveMarginalVariation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveMarginalVariation);
  }
}

TEST_CASE("independence gives zero") {
  const auto p = table({{0.06, 0.14}, {0.24, 0.56}});
  for (const auto& f : testing::experiment_generators()) {
    CHECK(std::abs(phi_f(p, f).value) <= 1e-12);
    CHECK(std::abs(phi_geo(p, f).value) <= 1e-12);
  }
}

TEST_CASE("printed examples on the artificial and survey tables") {
  CHECK(std::abs(phi_geo(fixed_table("artificial-1a"), power_f(0.5)).value - 0.0487) <= kTol4);
  for (double lambda : {0.0, 0.5, 1.0}) CHECK(phi_geo(fixed_table("artificial-1c"), power_f(lambda)).value == 1.0);

  const auto cannabis = from_counts(dataset("cannabis"));
  CHECK(std::abs(phi_f(cannabis, power_f(1.0)).value - 0.1034) <= kTol4);
  CHECK(std::abs(phi_geo(cannabis, power_f(1.0)).value - 0.2992) <= kTol4);

  const auto bvn = bvn_table(BvnSpec{0.8});
  CHECK(std::abs(phi_f(bvn, power_f(0.5)).value - 0.2479) <= kTol4);

  const auto occ85 = from_counts(dataset("occupational-1985"));
  CHECK(std::abs(phi_geo(occ85, omega_f(0.9)).value - 0.0695) <= kTol4);

  // fixes the orientation of the omega family
  const auto occ75 = from_counts(dataset("occupational-1975"));
  CHECK(std::abs(phi_f(occ75, omega_f(0.0)).value - 0.0480) <= kTol4);
}

TEST_CASE("orientation flips leave both measures unchanged") {
  const auto flipped = custom_f("neg-gini", [](double x) { return x - x * x; },
                                [](double x) { return 1.0 - 2.0 * x; });
  const auto occ75 = from_counts(dataset("occupational-1975"));
  CHECK(phi_f(occ75, flipped).value == doctest::Approx(phi_f(occ75, power_f(1.0)).value).epsilon(1e-14));
  CHECK(phi_geo(occ75, flipped).value == doctest::Approx(phi_geo(occ75, power_f(1.0)).value).epsilon(1e-14));
}

TEST_CASE("estimate metadata") {
  const auto e = estimate(MeasureKind::phi_geo, fixed_table("artificial-1a"), power_f(0.5));
  CHECK(e.kind == MeasureKind::phi_geo);
  CHECK(e.rows == 3);
  CHECK(e.cols == 3);
  CHECK(e.fspec == "power(lambda=0.5)");
  CHECK_FALSE(e.se.has_value());
  CHECK(to_string(MeasureKind::phi_f) == "prv");
  CHECK(measure_kind_from_string("geoprv") == MeasureKind::phi_geo);
  CHECK_THROWS_AS(measure_kind_from_string("chi2"), Error);
}

TEST_CASE("zero-weight rows do not change the measure") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const auto t = testing::random_table(rng);
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(t.rows() + 1, t.cols());
    padded.topRows(t.rows()) = t.matrix();
    const ProbabilityTable q(padded);
    for (const auto& f : testing::experiment_generators()) {
      CHECK(std::abs(phi_geo(q, f).value - phi_geo(t, f).value) <= 1e-14);
      CHECK(std::abs(phi_f(q, f).value - phi_f(t, f).value) <= 1e-14);
    }
  }
}

TEST_CASE("ordering, range and AM-GM on random tables") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto t = testing::random_table(rng);
    for (const auto& f : testing::experiment_generators()) {
      const auto profile = variation_profile(t, f);
      const double a = (profile.marginal - profile.arithmetic_mean()) / profile.marginal;
      const double g = (profile.marginal - profile.geometric_mean()) / profile.marginal;
      CHECK(a <= g + 1e-12);
      CHECK(a >= -1e-12);
      CHECK(g <= 1.0 + 1e-12);
      CHECK(profile.geometric_mean() <= profile.arithmetic_mean() + 1e-12);
    }
  }
}

TEST_CASE("permutation invariance") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 300; ++rep) {
    const auto t = testing::random_table(rng);
    const auto rp = testing::random_permutation(rng, t.rows());
    const auto cp = testing::random_permutation(rng, t.cols());
    const auto q = permute(t, rp, cp);
    for (const auto& f : testing::experiment_generators()) {
      CHECK(std::abs(phi_f(q, f).value - phi_f(t, f).value) <= 1e-12);
      CHECK(std::abs(phi_geo(q, f).value - phi_geo(t, f).value) <= 1e-12);
    }
  }
}

TEST_CASE("independence in both directions") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 300; ++rep) {
    const auto t = testing::random_independent_table(rng);
    for (const auto& f : testing::experiment_generators()) {
      CHECK(std::abs(phi_f(t, f).value) <= 1e-10);
      CHECK(std::abs(phi_geo(t, f).value) <= 1e-10);
    }
  }
  for (int rep = 0; rep < 300; ++rep) {
    const auto t = testing::random_table(rng);
    for (const auto& f : testing::experiment_generators())
      if (phi_geo(t, f).value <= 1e-10) CHECK(t.independence_gap() <= 1e-8);
  }
}

TEST_CASE("a planted one-hot row gives exactly one") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 300; ++rep) {
    const auto t = plant_one_hot_row(testing::random_table(rng), rng);
    for (const auto& f : testing::experiment_generators()) {
      CHECK(phi_geo(t, f).value == 1.0);
      CHECK(phi_f(t, f).value < 1.0);
    }
  }
}

TEST_CASE("geometric product underflow still yields exactly one") {
  const auto p = table({{0.5 - 1e-300, 1e-300}, {0.25, 0.25}});
  CHECK(phi_geo(p, power_f(1.0)).value <= 1.0);
  CHECK(phi_geo(p, power_f(1.0)).value >= 0.0);
}

}  // TEST_SUITE
