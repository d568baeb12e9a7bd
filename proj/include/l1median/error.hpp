#pragma once

#include <stdexcept>
#include <string>

namespace l1m {

enum class ErrorCode {
  kSelfIntersection,
  kHoleOutsideOuter,
  kHolesOverlap,
  kDegenerateRing,
  kDiagonalAlignment,
  kPointOutsideDomain,
  kDegenerateBisector,
  kDegeneratePosition,
  kDegenerateTriangle,
  kNonHorizontalBase,
  kApexOutsideQuadrant,
  kIllConditionedFit,
  kCellTooThin,
  kOutsideCell,
  kNotATree,
  kHasHoles,
  kBadInput,
};

const char* to_string(ErrorCode code);

/// The single exception type thrown by the library. `ring()` names the
/// offending ring for validation failures and is -1 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int ring = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), ring_(ring) {}

  ErrorCode code() const { return code_; }
  int ring() const { return ring_; }

 private:
  ErrorCode code_;
  int ring_;
};

}  // namespace l1m
