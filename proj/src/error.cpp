#include "prv/error.hpp"

namespace prv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::NonIntegerCell: return "NonIntegerCell";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NonPositiveMarginalVariation: return "NonPositiveMarginalVariation";
    case ErrorCode::BoundaryCase: return "BoundaryCase";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::InteriorRequired: return "InteriorRequired";
    case ErrorCode::BadCorrelation: return "BadCorrelation";
    case ErrorCode::UnknownName: return "UnknownName";
  }
  return "Unknown";
}

}  // namespace prv
