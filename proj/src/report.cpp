#include "prv/report.hpp"

#include <iomanip>
#include <sstream>

namespace prv {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json interval(const std::optional<Interval>& v) {
  return v ? json::array({v->lower, v->upper}) : json(nullptr);
}

std::optional<Interval> read_interval(const json& j) {
  if (j.is_null()) return std::nullopt;
  return Interval{j.at(0).get<double>(), j.at(1).get<double>()};
}

std::optional<double> read_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

json to_json(const RunReport& r) {
  json input = json::object();
  if (r.input.path) input["path"] = *r.input.path;
  if (r.input.named) input["named"] = *r.input.named;
  input["R"] = r.input.rows;
  input["C"] = r.input.cols;
  input["n"] = r.input.n ? json(*r.input.n) : json(nullptr);

  json result = {{"value", r.result.value}, {"se", optional_number(r.result.se)},
                 {"ci", interval(r.result.ci)}};
  if (r.result.percentile_ci) result["percentile_ci"] = interval(r.result.percentile_ci);

  return json{
      {"input", input},
      {"settings",
       {{"measure", r.settings.measure},
        {"family", r.settings.family},
        {"param", r.settings.param},
        {"alpha", r.settings.alpha},
        {"se_method", r.settings.se_method},
        {"seed", r.settings.seed}}},
      {"result", result},
      {"diagnostics",
       {{"zero_cells", r.diagnostics.zero_cells},
        {"boundary", r.diagnostics.boundary},
        {"warnings", r.diagnostics.warnings}}},
      {"timing_ms", r.timing_ms},
  };
}

RunReport run_report_from_json(const json& j) {
  RunReport r;
  const auto& in = j.at("input");
  if (in.contains("path")) r.input.path = in.at("path").get<std::string>();
  if (in.contains("named")) r.input.named = in.at("named").get<std::string>();
  r.input.rows = in.at("R").get<std::int64_t>();
  r.input.cols = in.at("C").get<std::int64_t>();
  if (!in.at("n").is_null()) r.input.n = in.at("n").get<std::int64_t>();

  const auto& s = j.at("settings");
  r.settings.measure = s.at("measure").get<std::string>();
  r.settings.family = s.at("family").get<std::string>();
  r.settings.param = s.at("param").get<double>();
  r.settings.alpha = s.at("alpha").get<double>();
  r.settings.se_method = s.at("se_method").get<std::string>();
  r.settings.seed = s.at("seed").get<std::uint64_t>();

  const auto& res = j.at("result");
  r.result.value = res.at("value").get<double>();
  r.result.se = read_number(res.at("se"));
  r.result.ci = read_interval(res.at("ci"));
  if (res.contains("percentile_ci")) r.result.percentile_ci = read_interval(res.at("percentile_ci"));

  const auto& d = j.at("diagnostics");
  r.diagnostics.zero_cells = d.at("zero_cells").get<std::int64_t>();
  r.diagnostics.boundary = d.at("boundary").get<bool>();
  r.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
  r.timing_ms = j.at("timing_ms").get<double>();
  return r;
}

std::string to_text(const RunReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "input     " << (r.input.named ? *r.input.named : r.input.path.value_or("<stdin>")) << " ("
      << r.input.rows << "x" << r.input.cols;
  if (r.input.n) out << ", n=" << *r.input.n;
  out << ")\n";
  out << "measure   " << r.settings.measure << ", " << r.settings.family << "(" << r.settings.param
      << ")\n";
  out << "estimate  " << r.result.value << '\n';
  if (r.result.se) out << "se        " << *r.result.se << "  [" << r.settings.se_method << "]\n";
  if (r.result.ci) {
    out << "ci        (" << r.result.ci->lower << ", " << r.result.ci->upper << ")  "
        << std::setprecision(0) << 100.0 * (1.0 - r.settings.alpha) << "%\n"
        << std::setprecision(4);
  }
  if (r.result.percentile_ci)
    out << "pct ci    (" << r.result.percentile_ci->lower << ", " << r.result.percentile_ci->upper
        << ")\n";
  return out.str();
}

}  // namespace prv
