#include "prv/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prv/datagen.hpp"
#include "prv/error.hpp"
#include "prv/normal.hpp"
#include "prv/rng.hpp"
#include "prv/summation.hpp"

namespace prv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Type-7 sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNaN;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct MeanSd {
  double mean = kNaN;
  double sd = kNaN;
};

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  if (values.empty()) return out;
  CompensatedSum<double> sum;
  for (double v : values) sum += v;
  out.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  CompensatedSum<double> ss;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss.value() / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace

std::string to_string(SeMethod method) {
  switch (method) {
    case SeMethod::delta_analytic: return "delta";
    case SeMethod::delta_numeric: return "delta-numeric";
    case SeMethod::bootstrap: return "bootstrap";
  }
  return "unknown";
}

SeMethod se_method_from_string(const std::string& name) {
  if (name == "delta" || name == "delta-analytic") return SeMethod::delta_analytic;
  if (name == "delta-numeric") return SeMethod::delta_numeric;
  if (name == "bootstrap") return SeMethod::bootstrap;
  throw Error(ErrorCode::UnknownName,
              "unknown se method '" + name + "' (expected delta, delta-numeric or bootstrap)");
}

Eigen::MatrixXd tangent_projection(const Eigen::MatrixXd& gradient) {
  return gradient.array() - gradient.mean();
}

double multinomial_variance(const ProbabilityTable& p, const Eigen::MatrixXd& gradient) {
  CompensatedSum<double> first;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (p(i, j) > 0.0) first += p(i, j) * gradient(i, j);
  const double centre = first.value();
  CompensatedSum<double> second;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (p(i, j) > 0.0) {
        const double d = gradient(i, j) - centre;
        second += p(i, j) * d * d;
      }
  return second.value();
}

Eigen::MatrixXd simplex_gradient(MeasureKind kind, const ProbabilityTable& p, const FSpec& f,
                                 double step) {
  const Eigen::MatrixXd& base = p.matrix();
  const double at_base = measure_value(kind, base, f);
  Eigen::MatrixXd grad(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      Eigen::MatrixXd up = base;
      up(i, j) += step;
      up /= 1.0 + step;
      const double f_up = measure_value(kind, up, f);
      if (base(i, j) >= step) {
        Eigen::MatrixXd down = base;
        down(i, j) -= step;
        down /= 1.0 - step;
        grad(i, j) = (f_up - measure_value(kind, down, f)) / (2.0 * step);
      } else {
        grad(i, j) = (f_up - at_base) / step;
      }
    }
  }
  return grad;
}

DeltaVariance delta_variance(const ProbabilityTable& p, const FSpec& f, EpsilonForm form) {
  const auto profile = variation_profile(p, f);
  const Eigen::VectorXd& row = p.row_marginals();
  const Eigen::VectorXd& col = p.col_marginals();
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (!(row(i) > 0.0))
      throw Error(ErrorCode::DegenerateRow, "row " + std::to_string(i + 1) + " has zero mass");
  }
  if (profile.has_complete_row())
    throw Error(ErrorCode::BoundaryCase,
                "a row has zero conditional variation (measure = 1); delta-method CI undefined");

  // sum_t f(p_.t) = -V(Y)
  const double sum_f_marginal = -profile.marginal;

  DeltaVariance out;
  GradientReport& g = out.gradient;
  g.delta = profile.geometric_mean() / (sum_f_marginal * sum_f_marginal);
  g.epsilon.resize(p.rows(), p.cols());
  g.Delta.resize(p.rows(), p.cols());

  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    CompensatedSum<double> weighted_deriv;  // sum_t q_t f'(q_t), zero-weight terms dropped
    CompensatedSum<double> deriv_sum;       // sum_t f'(q_t)
    for (Eigen::Index t = 0; t < p.cols(); ++t) {
      const double q = p(i, t) / row(i);
      if (q > 0.0) weighted_deriv += q * f.deriv(q);
      deriv_sum += f.deriv(q);
    }
    const double denom = form == EpsilonForm::exact ? -profile.conditional(i) : deriv_sum.value();
    const double log_v = std::log(profile.conditional(i));
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double q = p(i, j) / row(i);
      const double fq = f.deriv(q);
      if (!std::isfinite(fq)) {
        g.epsilon(i, j) = kNaN;
        g.Delta(i, j) = kNaN;
        continue;
      }
      g.epsilon(i, j) = log_v + (-weighted_deriv.value() + fq) / denom;
      g.Delta(i, j) = f.deriv(col(j)) - g.epsilon(i, j) * sum_f_marginal;
    }
  }
  g.analytic = -g.delta * g.Delta;

  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (p(i, j) > 0.0 && !std::isfinite(g.Delta(i, j)))
        throw Error(ErrorCode::BoundaryCase, "non-finite derivative at a positive cell");

  g.finite_difference = simplex_gradient(MeasureKind::phi_geo, p, f);

  // Compare on positive cells only; zero cells may have a divergent one-sided slope.
  Eigen::MatrixXd a = g.analytic;
  Eigen::MatrixXd b = g.finite_difference;
  const auto positive = (p.matrix().array() > 0.0);
  const auto count = static_cast<double>(positive.count());
  const double a_mean = positive.select(a.array(), 0.0).sum() / count;
  const double b_mean = positive.select(b.array(), 0.0).sum() / count;
  g.max_abs_deviation =
      positive.select((a.array() - a_mean) - (b.array() - b_mean), 0.0).abs().maxCoeff();

  // sigma^2 = delta^2 [sum p Delta^2 - (sum p Delta)^2], computed in centred form.
  Eigen::MatrixXd finite_delta = g.Delta;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (!(p(i, j) > 0.0)) finite_delta(i, j) = 0.0;
  out.sigma2 = g.delta * g.delta * multinomial_variance(p, finite_delta);
  return out;
}

double numeric_delta_variance(MeasureKind kind, const ProbabilityTable& p, const FSpec& f) {
  if (kind == MeasureKind::phi_geo && variation_profile(p, f).has_complete_row())
    throw Error(ErrorCode::BoundaryCase, "a row has zero conditional variation (measure = 1)");
  return multinomial_variance(p, simplex_gradient(kind, p, f));
}

BootstrapResult bootstrap(const ContingencyTable& t, const FSpec& f, MeasureKind kind,
                          std::int64_t replicates, std::uint64_t seed, double alpha,
                          unsigned workers) {
  if (replicates < 1) throw Error(ErrorCode::BadParameter, "bootstrap needs at least one replicate");
  const ProbabilityTable p_hat = from_counts(t);
  std::vector<std::optional<double>> slots(static_cast<std::size_t>(replicates));
  parallel_for(replicates, workers, [&](std::int64_t k) {
    auto engine = stream_engine(seed, static_cast<std::uint64_t>(k));
    const auto sample = sample_multinomial(p_hat, t.total(), engine);
    try {
      slots[static_cast<std::size_t>(k)] = estimate(kind, from_counts(sample), f).value;
    } catch (const Error&) {
      // recorded as a failure below
    }
  });

  BootstrapResult out;
  out.replicates = replicates;
  for (const auto& s : slots) {
    if (s) out.values.push_back(*s);
    else ++out.failures;
  }
  const auto stats = mean_sd(out.values);
  out.mean = stats.mean;
  out.se = stats.sd;
  std::vector<double> sorted = out.values;
  std::sort(sorted.begin(), sorted.end());
  out.percentile = {sorted_quantile(sorted, 0.5 * alpha), sorted_quantile(sorted, 1.0 - 0.5 * alpha)};
  return out;
}

MeasureEstimate confidence_interval(const ContingencyTable& t, const FSpec& f, MeasureKind kind,
                                    const CIConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
    throw Error(ErrorCode::BadParameter, "alpha must lie in (0, 1]");
  if (t.total() <= 0) throw Error(ErrorCode::ZeroTotal, "table total is 0");
  const ProbabilityTable p_hat = from_counts(t, cfg.smoothing);
  MeasureEstimate out = estimate(kind, p_hat, f);
  out.n = t.total();
  const double n = static_cast<double>(t.total());

  if (kind == MeasureKind::phi_geo && variation_profile(p_hat, f).has_complete_row())
    throw Error(ErrorCode::BoundaryCase,
                "a row has zero conditional variation (measure = 1); CI undefined");

  double se = 0.0;
  switch (cfg.method) {
    case SeMethod::delta_analytic:
      if (kind != MeasureKind::phi_geo)
        throw Error(ErrorCode::BadParameter,
                    "analytic delta method is only available for geoprv; use delta-numeric or bootstrap");
      se = std::sqrt(std::max(0.0, delta_variance(p_hat, f, cfg.epsilon).sigma2) / n);
      break;
    case SeMethod::delta_numeric:
      se = std::sqrt(std::max(0.0, numeric_delta_variance(kind, p_hat, f)) / n);
      break;
    case SeMethod::bootstrap: {
      const auto boot = bootstrap(t, f, kind, cfg.boot_reps, cfg.seed, cfg.alpha, cfg.workers);
      se = boot.se;
      out.percentile_ci = boot.percentile;
      if (boot.failures * 100 > boot.replicates) {
        out.warnings.push_back("BootstrapDegenerate: " + std::to_string(boot.failures) + " of " +
                               std::to_string(boot.replicates) + " replicates failed and were excluded");
      } else if (boot.failures > 0) {
        out.warnings.push_back(std::to_string(boot.failures) + " bootstrap replicates excluded");
      }
      break;
    }
  }
  const double z = two_sided_z(cfg.alpha);
  out.se = se;
  out.ci = Interval{out.value - z * se, out.value + z * se};
  return out;
}

CoverageReport coverage_sim(const ProbabilityTable& true_p, const FSpec& f, std::int64_t n,
                            std::int64_t reps, const CIConfig& cfg) {
  CoverageReport out;
  out.truth = phi_geo(true_p, f).value;
  if (out.truth <= 1e-12 || out.truth >= 1.0 - 1e-12)
    throw Error(ErrorCode::InteriorRequired, "true measure must lie strictly inside (0, 1)");
  if (n < 1) throw Error(ErrorCode::BadParameter, "sample size must be >= 1");
  out.replicates = std::max<std::int64_t>(reps, 0);
  if (reps <= 0) return out;

  struct Slot {
    bool ok = false;
    bool covered = false;
    double value = 0.0;
    double se = 0.0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(reps));
  CIConfig inner = cfg;
  inner.workers = 1;
  parallel_for(reps, cfg.workers, [&](std::int64_t k) {
    auto engine = stream_engine(cfg.seed, static_cast<std::uint64_t>(k));
    const auto sample = sample_multinomial(true_p, n, engine);
    CIConfig local = inner;
    local.seed = mix64(cfg.seed ^ mix64(static_cast<std::uint64_t>(k) + 1));
    try {
      const auto est = confidence_interval(sample, f, MeasureKind::phi_geo, local);
      Slot& s = slots[static_cast<std::size_t>(k)];
      s.ok = true;
      s.value = est.value;
      s.se = *est.se;
      s.covered = est.ci->lower <= out.truth && out.truth <= est.ci->upper;
    } catch (const Error&) {
    }
  });

  std::vector<double> values;
  CompensatedSum<double> se_sum;
  for (const auto& s : slots) {
    if (!s.ok) {
      ++out.failures;
      continue;
    }
    values.push_back(s.value);
    se_sum += s.se;
    if (s.covered) ++out.covered;
  }
  if (values.empty()) return out;
  const auto stats = mean_sd(values);
  const auto valid = static_cast<double>(values.size());
  out.coverage = static_cast<double>(out.covered) / valid;
  out.mean_estimate = stats.mean;
  out.bias = stats.mean - out.truth;
  out.mean_se = se_sum.value() / valid;
  if (values.size() > 1) out.sd_estimate = stats.sd;
  return out;
}

}  // namespace prv
