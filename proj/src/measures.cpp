#include "prv/measures.hpp"

#include <cmath>

namespace prv {

std::string to_string(MeasureKind kind) { return kind == MeasureKind::phi_f ? "prv" : "geoprv"; }

MeasureKind measure_kind_from_string(const std::string& name) {
  if (name == "prv" || name == "phi_f" || name == "egprv") return MeasureKind::phi_f;
  if (name == "geoprv" || name == "phi_geo" || name == "phi_gf") return MeasureKind::phi_geo;
  throw Error(ErrorCode::UnknownName, "unknown measure '" + name + "' (expected prv or geoprv)");
}

double VariationProfile::arithmetic_mean() const {
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (weights(i) > 0.0) acc += weights(i) * conditional(i);
  return acc.value();
}

bool VariationProfile::has_complete_row() const {
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (weights(i) > 0.0 && conditional(i) == 0.0) return true;
  return false;
}

double VariationProfile::geometric_mean() const {
  if (has_complete_row()) return 0.0;
  CompensatedSum<double> log_acc;
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (weights(i) > 0.0) log_acc += weights(i) * std::log(conditional(i));
  return std::exp(log_acc.value());
}

MeasureEstimate estimate(MeasureKind kind, const ProbabilityTable& p, const FSpec& f) {
  const auto profile = variation_profile(p, f);
  MeasureEstimate out;
  out.kind = kind;
  out.value = kind == MeasureKind::phi_f ? phi_f_value(profile) : phi_geo_value(profile);
  out.fspec = f.describe();
  out.rows = p.rows();
  out.cols = p.cols();
  return out;
}

MeasureEstimate phi_f(const ProbabilityTable& p, const FSpec& f) {
  return estimate(MeasureKind::phi_f, p, f);
}

MeasureEstimate phi_geo(const ProbabilityTable& p, const FSpec& f) {
  return estimate(MeasureKind::phi_geo, p, f);
}

}  // namespace prv
