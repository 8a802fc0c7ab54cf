#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace berglab {

enum class ErrorCode {
  NonDisjoint,
  Underflow,
  RuleViolation,
  NotBoundaryPoint,
  BisectionFailure,
  GridTooSmall,
  NonConvergence,
  PreconditionViolated,
  EmptySet,
  AnnulusEmpty,
  QuadratureStall,
  RankCollapse,
  OutsideDomain,
  DegenerateConstraint,
  ScaleNotRetained,
  NoSecondPoint,
  PolesTooClose,
  InsufficientSpan,
  ConfigInvalid,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; the code is what the CLI
// reports in its machine-readable error document.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace berglab
