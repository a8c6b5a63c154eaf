#include "prv/ffamily.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <limits>
#include <sstream>
#include <tuple>
#include <vector>

#include "prv/error.hpp"

namespace prv {

double FSpec::eval_unoriented(double x) const {
  switch (family_) {
    case Family::power: {
      if (std::abs(parameter_) <= kShannonThreshold) return x > 0.0 ? x * std::log(x) : 0.0;
      if (x == 0.0) return 0.0;
      return (std::pow(x, parameter_ + 1.0) - x) / parameter_;
    }
    case Family::omega: {
      const double w = parameter_;
      const double d = x - 1.0;
      return d * d / (w * x + 1.0 - w) + d / (1.0 - w);
    }
    case Family::omega_printed: {
      const double w = parameter_;
      const double d = x - 1.0;
      return d * d / (w * x + 1.0 - w) - d / (1.0 - w);
    }
    case Family::custom:
      return custom_eval_(x);
  }
  return 0.0;
}

double FSpec::deriv_unoriented(double x) const {
  switch (family_) {
    case Family::power: {
      if (std::abs(parameter_) <= kShannonThreshold) return std::log(x) + 1.0;
      return ((parameter_ + 1.0) * std::pow(x, parameter_) - 1.0) / parameter_;
    }
    case Family::omega:
    case Family::omega_printed: {
      const double w = parameter_;
      const double d = x - 1.0;
      const double den = w * x + 1.0 - w;
      const double quad = 2.0 * d / den - w * d * d / (den * den);
      return family_ == Family::omega ? quad + 1.0 / (1.0 - w) : quad - 1.0 / (1.0 - w);
    }
    case Family::custom:
      return custom_deriv_(x);
  }
  return 0.0;
}

double FSpec::eval(double x) const { return orientation_ * eval_unoriented(x); }

double FSpec::deriv(double x) const { return orientation_ * deriv_unoriented(x); }

std::string FSpec::family_name() const {
  switch (family_) {
    case Family::power: return "power";
    case Family::omega: return "omega";
    case Family::omega_printed: return "omega-printed";
    case Family::custom: return name_;
  }
  return "unknown";
}

std::string FSpec::describe() const {
  std::ostringstream out;
  switch (family_) {
    case Family::power: out << "power(lambda=" << parameter_ << ")"; break;
    case Family::omega: out << "omega(omega=" << parameter_ << ")"; break;
    case Family::omega_printed: out << "omega-printed(omega=" << parameter_ << ")"; break;
    case Family::custom: out << "custom(" << name_ << ")"; break;
  }
  return out.str();
}

FSpec power_f(double lambda) {
  if (!std::isfinite(lambda) || lambda <= -1.0)
    throw Error(ErrorCode::BadParameter, "power family needs lambda > -1");
  return FSpec(Family::power, lambda, +1);
}

FSpec omega_f(double omega) {
  if (!std::isfinite(omega) || omega < 0.0 || omega >= 1.0)
    throw Error(ErrorCode::BadParameter, "omega family needs 0 <= omega < 1");
  return FSpec(Family::omega, omega, +1);
}

FSpec omega_printed_f(double omega) {
  if (!std::isfinite(omega) || omega < 0.0 || omega >= 1.0)
    throw Error(ErrorCode::BadParameter, "omega family needs 0 <= omega < 1");
  return FSpec(Family::omega_printed, omega, -1);
}

FSpec custom_f(std::string name, FSpec::Fn eval, FSpec::Fn deriv) {
  if (!eval || !deriv) throw Error(ErrorCode::BadParameter, "custom f needs eval and deriv");
  const double v = -2.0 * eval(0.5);
  FSpec f(Family::custom, 0.0, v < 0.0 ? -1 : +1);
  f.name_ = std::move(name);
  f.custom_eval_ = std::move(eval);
  f.custom_deriv_ = std::move(deriv);
  return f;
}

ConditionReport check_conditions(const FSpec& f, std::uint64_t seed) {
  ConditionReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // (i)
  double worst = -std::numeric_limits<double>::infinity();
  double wx = 0, wy = 0, wz = 0;
  for (int k = 0; k < 1000; ++k) {
    double t[3] = {1.0 - unit(rng), 1.0 - unit(rng), 1.0 - unit(rng)};  // (0, 1]
    std::sort(t, t + 3);
    const auto [x, y, z] = std::tuple{t[0], t[1], t[2]};
    if (z - x <= 0.0) continue;
    const double chord = ((z - y) * f.raw(x) + (y - x) * f.raw(z)) / (z - x);
    const double excess = f.raw(y) - chord;
    if (excess > worst) {
      worst = excess;
      wx = x, wy = y, wz = z;
    }
  }
  report.convex.pass = worst <= 1e-12;
  {
    std::ostringstream d;
    d << "max f(y) - chord = " << worst << " at (" << wx << ", " << wy << ", " << wz << ")";
    report.convex.detail = d.str();
  }

  // (ii)
  const double f0 = f.raw(0.0);
  report.zero_weight.pass = std::isfinite(f0);
  report.zero_weight.detail = "f(0) = " + std::to_string(f0);

  // (iii)
  bool shrinking = true;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 3; k <= 12; ++k) {
    const double v = std::abs(f.raw(std::pow(10.0, -k)));
    if (v > previous + 1e-15) shrinking = false;
    previous = v;
  }
  report.limit_estimate = f.raw(1e-12);
  report.limit_at_zero.pass = shrinking && std::abs(report.limit_estimate) <= 1e-3;
  report.limit_at_zero.detail = "raw f(1e-12) = " + std::to_string(report.limit_estimate);

  // (iv)
  const double f1 = f.raw(1.0);
  report.one_is_root.pass = std::abs(f1) <= 1e-15;
  report.one_is_root.detail = "f(1) = " + std::to_string(f1);

  // A variation that does not depend on p (for a fixed length) makes every measure 0/0 or 0.
  bool constant = true;
  for (int len = 2; len <= 6 && constant; ++len) {
    double first = 0.0;
    for (int k = 0; k < 40; ++k) {
      std::vector<double> p(static_cast<std::size_t>(len));
      double s = 0;
      for (auto& v : p) s += (v = unit(rng) + 1e-3);
      double variation = 0;
      for (double v : p) variation -= f.eval(v / s);
      if (k == 0) first = variation;
      else if (std::abs(variation - first) > 1e-12) constant = false;
    }
  }
  report.degenerate = constant;
  return report;
}

}  // namespace prv
