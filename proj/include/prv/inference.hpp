#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "prv/ffamily.hpp"
#include "prv/measures.hpp"
#include "prv/table.hpp"

namespace prv {

/// Which expression is used for the per-cell log-derivative term epsilon_ij.
///
/// `exact` divides by sum_t f(p_it / p_i.) (= -V(Y|X=i)), which is what the
/// chain rule gives and what the finite-difference gradient confirms.
/// `as_printed` divides by sum_t f'(p_it / p_i.) instead; it is kept so the
/// two can be compared, and does not reproduce published standard errors.
enum class EpsilonForm { exact, as_printed };

enum class SeMethod { delta_analytic, delta_numeric, bootstrap };

std::string to_string(SeMethod method);
SeMethod se_method_from_string(const std::string& name);

/// Per-cell pieces of the delta-method variance of the geometric measure.
///
/// analytic(i, j) = dPhi_G / dp_ij = -delta * Delta(i, j). Cells with
/// p_ij = 0 whose f'(0) diverges hold NaN in Delta, epsilon and analytic;
/// they carry zero weight in the variance.
struct GradientReport {
  double delta = 0.0;
  Eigen::MatrixXd Delta;
  Eigen::MatrixXd epsilon;
  Eigen::MatrixXd analytic;
  Eigen::MatrixXd finite_difference;
  /// Max |.| difference of the two gradients after removing their means
  /// (the gradient on the simplex is only defined up to a constant shift).
  double max_abs_deviation = 0.0;
};

struct DeltaVariance {
  double sigma2 = 0.0;
  GradientReport gradient;
};

/// Asymptotic variance sigma^2 of sqrt(n) (Phi_G_hat - Phi_G).
///
/// Throws DegenerateRow if some p_i. = 0 and BoundaryCase if some
/// conditional variation is 0 (Phi_G = 1, not asymptotically normal).
DeltaVariance delta_variance(const ProbabilityTable& p, const FSpec& f,
                             EpsilonForm form = EpsilonForm::exact);

/// Central differences of the measure along renormalized cell perturbations
/// (forward differences for cells below the step).
Eigen::MatrixXd simplex_gradient(MeasureKind kind, const ProbabilityTable& p, const FSpec& f,
                                 double step = 1e-6);

/// g - mean(g): the component of a gradient tangent to the simplex.
Eigen::MatrixXd tangent_projection(const Eigen::MatrixXd& gradient);

/// Multinomial delta-method variance sum p (g - sum p g)^2 for any gradient g.
double multinomial_variance(const ProbabilityTable& p, const Eigen::MatrixXd& gradient);

/// Delta-method variance from the finite-difference gradient; works for both measures.
double numeric_delta_variance(MeasureKind kind, const ProbabilityTable& p, const FSpec& f);

struct BootstrapResult {
  std::int64_t replicates = 0;
  std::int64_t failures = 0;
  double mean = 0.0;
  double se = 0.0;
  Interval percentile;
  std::vector<double> values;  // successful replicates, in replicate order
};

/// B multinomial resamples of size n from the plug-in table. Replicate k
/// draws from stream (seed, k), so results do not depend on `workers`.
BootstrapResult bootstrap(const ContingencyTable& t, const FSpec& f, MeasureKind kind,
                          std::int64_t replicates, std::uint64_t seed, double alpha = 0.05,
                          unsigned workers = 1);

struct CIConfig {
  double alpha = 0.05;
  SeMethod method = SeMethod::delta_analytic;
  std::int64_t boot_reps = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  EpsilonForm epsilon = EpsilonForm::exact;
  double smoothing = 0.0;
};

/// Point estimate with standard error and estimate +- z_{alpha/2} se.
///
/// delta_analytic is only defined for the geometric measure.
MeasureEstimate confidence_interval(const ContingencyTable& t, const FSpec& f, MeasureKind kind,
                                    const CIConfig& cfg);

struct CoverageReport {
  double truth = 0.0;
  std::int64_t replicates = 0;
  std::int64_t failures = 0;
  std::int64_t covered = 0;
  std::optional<double> coverage;
  std::optional<double> mean_estimate;
  std::optional<double> bias;
  std::optional<double> mean_se;
  /// Empirical standard deviation of the replicate estimates.
  std::optional<double> sd_estimate;
};

/// Monte Carlo coverage of the geometric-measure CI under Multinomial(n, true_p).
CoverageReport coverage_sim(const ProbabilityTable& true_p, const FSpec& f, std::int64_t n,
                            std::int64_t reps, const CIConfig& cfg);

/// Runs body(k) for k in [0, count) on up to `workers` threads.
template <typename Body>
void parallel_for(std::int64_t count, unsigned workers, Body&& body);

}  // namespace prv

#include "prv/detail/parallel.hpp"
