#pragma once

#include <cmath>
#include <numbers>

namespace prv {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Inverse standard normal CDF (Wichura's AS 241, ~1e-16 relative error).
double normal_quantile(double p);

/// Upper alpha/2 point: z such that P(|Z| > z) = alpha.
inline double two_sided_z(double alpha) { return normal_quantile(1.0 - 0.5 * alpha); }

}  // namespace prv
