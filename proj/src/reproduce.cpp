#include "prv/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "prv/datagen.hpp"
#include "prv/error.hpp"
#include "prv/published_values.hpp"

namespace prv {

namespace {

constexpr double kValueTolerance = 5e-5;
constexpr double kUncertaintyTolerance = 5e-4;

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

FSpec make_f(const std::string& family, double param) {
  if (family == "power") return power_f(param);
  if (family == "omega") return omega_f(param);
  throw Error(ErrorCode::UnknownName, "unknown family '" + family + "'");
}

ProbabilityTable probability_input(const std::string& input) {
  if (const auto rho = bvn_rho_from_input(input)) return bvn_table(BvnSpec{.rho = *rho});
  return fixed_table(input);
}

}  // namespace

std::optional<double> bvn_rho_from_input(const std::string& input) {
  if (input.rfind("bvn-", 0) != 0) return std::nullopt;
  return std::stod(input.substr(4));
}

std::vector<PublishedValue> parse_published_values(const std::string& csv) {
  std::vector<PublishedValue> out;
  std::stringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 7) throw Error(ErrorCode::InvalidTable, "malformed published value: " + line);
    out.push_back({f[0], f[1], f[2], f[3], f[4], f[5], std::stod(f[6])});
  }
  return out;
}

const std::vector<PublishedValue>& published_values() {
  static const std::vector<PublishedValue> values = parse_published_values(detail::kPublishedValuesCsv);
  return values;
}

std::vector<std::string> default_reproduce_tables() { return {"2", "5", "6", "8", "9"}; }

bool ReproducedValue::pass() const {
  if (!enforced) return true;
  return std::abs(computed - published.expected) <= tolerance;
}

std::size_t ReproducedTable::mismatches() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](const auto& v) { return !v.pass(); }));
}

std::vector<ReproducedTable> reproduce(const ReproduceOptions& options) {
  std::set<std::string> wanted(options.tables.begin(), options.tables.end());
  for (const auto& t : wanted) {
    static const std::set<std::string> known = {"2", "4", "5", "6", "8", "9"};
    if (!known.count(t)) throw Error(ErrorCode::UnknownName, "no reproducible table '" + t + "'");
  }

  std::vector<ReproducedTable> tables;
  struct Computed {
    MeasureEstimate estimate;
    std::optional<SeMethod> method;
  };
  std::map<std::tuple<std::string, std::string, std::string, std::string>, Computed> cache;
  std::map<std::string, ProbabilityTable> bvn_cache;

  for (const auto& pv : published_values()) {
    const std::string number = pv.id.substr(1, pv.id.find_first_not_of("0123456789", 1) - 1);
    if (!wanted.count(number)) continue;
    if (tables.empty() || tables.back().id != pv.id) tables.push_back({pv.id, {}});

    ReproducedValue rv;
    rv.published = pv;
    rv.tolerance = (pv.field == "value" || pv.measure == "cell") ? kValueTolerance : kUncertaintyTolerance;

    if (pv.measure == "cell") {
      auto it = bvn_cache.find(pv.input);
      if (it == bvn_cache.end()) it = bvn_cache.emplace(pv.input, probability_input(pv.input)).first;
      const auto c = pv.field.find('c');
      const int i = std::stoi(pv.field.substr(1, c - 1)) - 1;
      const int j = std::stoi(pv.field.substr(c + 1)) - 1;
      rv.computed = it->second(i, j);
      tables.back().values.push_back(rv);
      continue;
    }

    const auto kind = measure_kind_from_string(pv.measure);
    const auto key = std::make_tuple(pv.input, pv.measure, pv.family, pv.param);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const FSpec f = make_f(pv.family, std::stod(pv.param));
      Computed computed;
      if (is_dataset(pv.input)) {
        CIConfig cfg;
        cfg.method = options.se_method.value_or(kind == MeasureKind::phi_geo ? SeMethod::delta_analytic
                                                                             : SeMethod::delta_numeric);
        if (cfg.method == SeMethod::delta_analytic && kind == MeasureKind::phi_f)
          cfg.method = SeMethod::delta_numeric;
        cfg.epsilon = options.epsilon;
        cfg.boot_reps = options.boot_reps;
        cfg.seed = options.seed;
        cfg.workers = options.workers;
        computed.estimate = confidence_interval(dataset(pv.input), f, kind, cfg);
        computed.method = cfg.method;
      } else {
        auto bt = bvn_cache.find(pv.input);
        if (bt == bvn_cache.end()) bt = bvn_cache.emplace(pv.input, probability_input(pv.input)).first;
        computed.estimate = estimate(kind, bt->second, f);
      }
      it = cache.emplace(key, computed).first;
    }
    const MeasureEstimate& est = it->second.estimate;
    if (pv.field == "value") {
      rv.computed = est.value;
    } else {
      const auto method = it->second.method;
      rv.note = method ? to_string(*method) : "";
      rv.enforced = method != SeMethod::bootstrap;
      if (pv.field == "se") rv.computed = est.se.value_or(std::nan(""));
      else if (pv.field == "ci_lo") rv.computed = est.ci ? est.ci->lower : std::nan("");
      else if (pv.field == "ci_hi") rv.computed = est.ci ? est.ci->upper : std::nan("");
    }
    tables.back().values.push_back(rv);
  }
  return tables;
}

std::string to_csv(const ReproducedTable& table) {
  std::ostringstream out;
  out << "input,measure,family,param,field,expected,computed,abs_diff,tolerance,status,note\n";
  for (const auto& v : table.values) {
    const auto& p = v.published;
    out << p.input << ',' << p.measure << ',' << p.family << ',' << p.param << ',' << p.field << ','
        << std::fixed << std::setprecision(4) << p.expected << ',' << std::setprecision(10)
        << v.computed << ',' << std::scientific << std::setprecision(2)
        << std::abs(v.computed - p.expected) << ',' << v.tolerance << std::defaultfloat << ','
        << (!v.enforced ? "info" : v.pass() ? "ok" : "MISMATCH") << ',' << v.note << '\n';
  }
  return out.str();
}

std::string to_text(const ReproducedTable& table) {
  std::ostringstream out;
  out << "== " << table.id << " ==\n" << std::fixed << std::setprecision(4);
  for (const auto& v : table.values) {
    const auto& p = v.published;
    out << std::left << std::setw(18) << p.input << std::setw(7) << p.measure << std::setw(6)
        << p.family << std::setw(5) << p.param << std::setw(7) << p.field << std::right
        << "  expected " << p.expected << "  computed " << v.computed << "  "
        << (!v.enforced ? "info" : v.pass() ? "ok" : "MISMATCH") << '\n';
  }
  return out.str();
}

}  // namespace prv
