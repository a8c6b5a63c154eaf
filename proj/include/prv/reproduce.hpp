#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prv/inference.hpp"

namespace prv {

struct PublishedValue {
  std::string id;       // e.g. "T6b"
  std::string input;    // named table, dataset or "bvn-<rho>"
  std::string measure;  // prv | geoprv | cell
  std::string family;   // power | omega | -
  std::string param;
  std::string field;    // value | se | ci_lo | ci_hi | r<i>c<j>
  double expected = 0.0;
};

/// Parsed embedded reference data.
const std::vector<PublishedValue>& published_values();

std::vector<PublishedValue> parse_published_values(const std::string& csv);

struct ReproduceOptions {
  /// Table numbers to regenerate ("2", "4", "5", "6", "8", "9").
  std::vector<std::string> tables;
  /// When unset, the arithmetic measure uses delta-numeric and the geometric
  /// measure the analytic delta method.
  std::optional<SeMethod> se_method;
  EpsilonForm epsilon = EpsilonForm::exact;
  std::int64_t boot_reps = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Tables regenerated by `prv reproduce --all`.
std::vector<std::string> default_reproduce_tables();

struct ReproducedValue {
  PublishedValue published;
  double computed = 0.0;
  double tolerance = 0.0;
  /// False for bootstrap standard errors, which are informational.
  bool enforced = true;
  std::string note;

  bool pass() const;
};

struct ReproducedTable {
  std::string id;
  std::vector<ReproducedValue> values;

  std::size_t mismatches() const;
};

std::vector<ReproducedTable> reproduce(const ReproduceOptions& options);

/// Parses "bvn-0.8" style inputs; nullopt for anything else.
std::optional<double> bvn_rho_from_input(const std::string& input);

std::string to_csv(const ReproducedTable& table);

/// 4-decimal side-by-side rendering of one table.
std::string to_text(const ReproducedTable& table);

}  // namespace prv
