#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genuslab {

enum class ErrorCode {
  NotInvertible,
  IncompatibleOffsets,
  InvalidOffset,
  InvalidWeight,
  InvalidArgument,
  NeedMoreOrder,
  NonPositiveWeight,
  NotACharacteristicClass,
  MissingPairing,
  InconsistentTable,
  OddWeightSum,
  NoFixedPoints,
  RequiresP1Zero,
  CapacityExceeded,
  UnknownMode,
  SpecMismatch,
  ParityMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  InvalidStructureConstants,
  SpectralObstruction,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// message adds context (offending monomial, line number, required order).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace genuslab
