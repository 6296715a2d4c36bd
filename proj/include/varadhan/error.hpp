#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vf {

enum class ErrorCode {
  AllZero,
  NegativeWeight,
  SpaceMismatch,
  NotMonotone,
  NegativeTerm,
  AllInfiniteRate,
  PointNotInSpace,
  InfeasibleJ,
  SequenceNotVanishing,
  PreconditionFailed,
  InvalidP,
  ScheduleTooShort,
  ParseError,
  InvariantViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by validate_decreasing; carries the first offending location.
class NotMonotoneError : public Error {
 public:
  NotMonotoneError(std::size_t term_index, std::size_t point,
                   const std::string& message)
      : Error(ErrorCode::NotMonotone, message),
        term_index_(term_index),
        point_(point) {}

  std::size_t term_index() const noexcept { return term_index_; }
  std::size_t point() const noexcept { return point_; }

 private:
  std::size_t term_index_;
  std::size_t point_;
};

}  // namespace vf
