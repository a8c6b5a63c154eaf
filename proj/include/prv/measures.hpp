#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prv/error.hpp"
#include "prv/ffamily.hpp"
#include "prv/summation.hpp"
#include "prv/table.hpp"

namespace prv {

enum class MeasureKind { phi_f, phi_geo };

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

/// Marginal variation V(Y) together with V(Y|X=i) and the row weights p_i..
/// Rows with zero weight carry conditional variation 0 and never contribute.
struct VariationProfile {
  double marginal = 0.0;
  Eigen::VectorXd conditional;
  Eigen::VectorXd weights;

  /// sum_i p_i. V(Y|X=i)
  double arithmetic_mean() const;
  /// prod_i V(Y|X=i)^{p_i.}, exactly 0 when a positive-weight row has V = 0.
  double geometric_mean() const;
  /// True when some positive-weight row has zero conditional variation.
  bool has_complete_row() const;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct MeasureEstimate {
  MeasureKind kind = MeasureKind::phi_geo;
  double value = 0.0;
  std::string fspec;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::optional<double> se;
  std::optional<Interval> ci;
  std::optional<Interval> percentile_ci;
  std::optional<std::int64_t> n;
  std::vector<std::string> warnings;
};

namespace detail {

/// Snaps values within 1e-12 of 0 or 1 onto the bound.
inline double clamp_near_bounds(double v) {
  constexpr double tol = 1e-12;
  if (v < 0.0 && v >= -tol) return 0.0;
  if (v > 1.0 && v <= 1.0 + tol) return 1.0;
  return v;
}

}  // namespace detail

/// Variation profile of an arbitrary nonnegative weight matrix. The matrix
/// is used as given (no normalization), so this also serves perturbed
/// points off the simplex when differentiating.
template <typename Derived>
VariationProfile variation_profile(const Eigen::MatrixBase<Derived>& p, const FSpec& f) {
  const Eigen::VectorXd row = compensated_row_sums(p.template cast<double>());
  const Eigen::VectorXd col = compensated_col_sums(p.template cast<double>());

  VariationProfile out;
  CompensatedSum<double> marginal;
  for (Eigen::Index j = 0; j < col.size(); ++j) marginal -= f.eval(col(j));
  out.marginal = marginal.value();
  if (!(out.marginal > 0.0)) {
    throw Error(ErrorCode::NonPositiveMarginalVariation,
                "marginal variation V(Y) = " + std::to_string(out.marginal) +
                    " (all mass in one response category?)");
  }

  out.weights = row;
  out.conditional = Eigen::VectorXd::Zero(row.size());
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (!(row(i) > 0.0)) continue;
    CompensatedSum<double> v;
    for (Eigen::Index j = 0; j < p.cols(); ++j) v -= f.eval(static_cast<double>(p(i, j)) / row(i));
    out.conditional(i) = std::max(0.0, v.value());
  }
  return out;
}

inline VariationProfile variation_profile(const ProbabilityTable& p, const FSpec& f) {
  return variation_profile(p.matrix(), f);
}

inline double phi_f_value(const VariationProfile& v) {
  return detail::clamp_near_bounds((v.marginal - v.arithmetic_mean()) / v.marginal);
}

inline double phi_geo_value(const VariationProfile& v) {
  const double g = v.geometric_mean();
  if (g == 0.0) return 1.0;
  return detail::clamp_near_bounds((v.marginal - g) / v.marginal);
}

template <typename Derived>
double measure_value(MeasureKind kind, const Eigen::MatrixBase<Derived>& p, const FSpec& f) {
  const auto profile = variation_profile(p, f);
  return kind == MeasureKind::phi_f ? phi_f_value(profile) : phi_geo_value(profile);
}

/// Arithmetic-mean PRV measure (eGPRV).
MeasureEstimate phi_f(const ProbabilityTable& p, const FSpec& f);

/// Geometric-mean PRV measure.
MeasureEstimate phi_geo(const ProbabilityTable& p, const FSpec& f);

MeasureEstimate estimate(MeasureKind kind, const ProbabilityTable& p, const FSpec& f);

}  // namespace prv
