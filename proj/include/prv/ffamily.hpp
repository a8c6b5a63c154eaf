#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace prv {

enum class Family { power, omega, omega_printed, custom };

/// Convex generator f inducing the variation V(p) = -sum_j f(p_j).
///
/// Every FSpec is canonicalized by an orientation sign s so that the
/// induced variation is nonnegative on probability vectors: eval() returns
/// s * raw(x). Consumers never see the unoriented form except through raw().
class FSpec {
 public:
  using Fn = std::function<double(double)>;

  Family family() const { return family_; }
  double parameter() const { return parameter_; }
  int orientation() const { return orientation_; }

  double eval(double x) const;
  /// f'(x). Only meaningful on (0, 1]; may be infinite at 0.
  double deriv(double x) const;
  /// The generator as written, before orientation.
  double raw(double x) const { return orientation_ * eval(x); }

  /// Short descriptor, e.g. "power(lambda=0.5)".
  std::string describe() const;
  std::string family_name() const;

  friend FSpec power_f(double lambda);
  friend FSpec omega_f(double omega);
  friend FSpec omega_printed_f(double omega);
  friend FSpec custom_f(std::string name, Fn eval, Fn deriv);

 private:
  FSpec(Family family, double parameter, int orientation)
      : family_(family), parameter_(parameter), orientation_(orientation) {}

  double eval_unoriented(double x) const;
  double deriv_unoriented(double x) const;

  Family family_;
  double parameter_;
  int orientation_;
  std::string name_;
  Fn custom_eval_;
  Fn custom_deriv_;
};

/// Below this |lambda| the power family switches to x log x.
inline constexpr double kShannonThreshold = 1e-9;

/// f(x) = (x^{lambda+1} - x) / lambda, lambda > -1; x log x at lambda = 0.
FSpec power_f(double lambda);

/// g(x) = (x-1)^2 / (omega x + 1 - omega) + (x-1) / (1-omega), 0 <= omega < 1.
///
/// omega = 0 gives x^2 - x, i.e. the Gini concentration. g(0) = g(1) = 0.
FSpec omega_f(double omega);

/// The omega generator with the opposite sign on the linear term,
/// (x-1)^2 / (omega x + 1 - omega) - (x-1) / (1-omega), oriented by s = -1.
/// Kept for diagnostics: its limit at 0 is 2/(1-omega), not 0.
FSpec omega_printed_f(double omega);

/// Programmatic extension point. Orientation is chosen so that the
/// induced variation of the uniform two-point distribution is >= 0.
FSpec custom_f(std::string name, FSpec::Fn eval, FSpec::Fn deriv);

struct ConditionCheck {
  bool pass = false;
  std::string detail;
};

/// Diagnostic sweep over the four generator conditions, evaluated on the
/// generator as written (raw), not its oriented form.
struct ConditionReport {
  ConditionCheck convex;          // (i) chord spot-check on random triples
  ConditionCheck zero_weight;     // (ii) f(0) finite so 0 * f(0) = 0
  ConditionCheck limit_at_zero;   // (iii) f(10^-k) -> 0, k = 3..12
  ConditionCheck one_is_root;     // (iv) f(1) = 0
  double limit_estimate = 0.0;    // raw(1e-12)
  bool degenerate = false;        // induced variation constant in p

  bool all_pass() const {
    return convex.pass && zero_weight.pass && limit_at_zero.pass && one_is_root.pass;
  }
};

ConditionReport check_conditions(const FSpec& f, std::uint64_t seed = 0x5eed);

}  // namespace prv
