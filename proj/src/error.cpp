#include "varadhan/error.hpp"

namespace vf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::NegativeTerm: return "NegativeTerm";
    case ErrorCode::AllInfiniteRate: return "AllInfiniteRate";
    case ErrorCode::PointNotInSpace: return "PointNotInSpace";
    case ErrorCode::InfeasibleJ: return "InfeasibleJ";
    case ErrorCode::SequenceNotVanishing: return "SequenceNotVanishing";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::ScheduleTooShort: return "ScheduleTooShort";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace vf
