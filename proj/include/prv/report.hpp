#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prv/measures.hpp"

namespace prv {

/// One `compute` result, serialized with stable keys:
/// {input:{path|named,R,C,n}, settings:{measure,family,param,alpha,se_method,seed},
///  result:{value,se,ci:[lo,hi]}, diagnostics:{zero_cells,boundary,warnings:[...]}, timing_ms}
struct RunReport {
  struct Input {
    std::optional<std::string> path;
    std::optional<std::string> named;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::optional<std::int64_t> n;
    friend bool operator==(const Input&, const Input&) = default;
  };
  struct Settings {
    std::string measure;
    std::string family;
    double param = 0.0;
    double alpha = 0.05;
    std::string se_method;
    std::uint64_t seed = 0;
    friend bool operator==(const Settings&, const Settings&) = default;
  };
  struct Result {
    double value = 0.0;
    std::optional<double> se;
    std::optional<Interval> ci;
    std::optional<Interval> percentile_ci;
    friend bool operator==(const Result&, const Result&) = default;
  };
  struct Diagnostics {
    std::int64_t zero_cells = 0;
    bool boundary = false;
    std::vector<std::string> warnings;
    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
  };

  Input input;
  Settings settings;
  Result result;
  Diagnostics diagnostics;
  double timing_ms = 0.0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

nlohmann::json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& j);

/// Fixed-width text rendering with 4 decimals.
std::string to_text(const RunReport& report);

}  // namespace prv
