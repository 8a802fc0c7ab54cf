#include "berglab/error.hpp"

namespace berglab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonDisjoint: return "NonDisjoint";
    case ErrorCode::Underflow: return "Underflow";
    case ErrorCode::RuleViolation: return "RuleViolation";
    case ErrorCode::NotBoundaryPoint: return "NotBoundaryPoint";
    case ErrorCode::BisectionFailure: return "BisectionFailure";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::AnnulusEmpty: return "AnnulusEmpty";
    case ErrorCode::QuadratureStall: return "QuadratureStall";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::DegenerateConstraint: return "DegenerateConstraint";
    case ErrorCode::ScaleNotRetained: return "ScaleNotRetained";
    case ErrorCode::NoSecondPoint: return "NoSecondPoint";
    case ErrorCode::PolesTooClose: return "PolesTooClose";
    case ErrorCode::InsufficientSpan: return "InsufficientSpan";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace berglab
