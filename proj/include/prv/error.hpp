#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prv {

enum class ErrorCode {
  ZeroTotal,
  EmptyColumn,
  InvalidPermutation,
  RaggedRows,
  NegativeCount,
  NonIntegerCell,
  TooSmall,
  InvalidTable,
  BadParameter,
  NonPositiveMarginalVariation,
  BoundaryCase,
  DegenerateRow,
  InteriorRequired,
  BadCorrelation,
  UnknownName,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Thrown by every library routine on contract violation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prv
