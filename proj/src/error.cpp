#include "stieltjes/error.hpp"

namespace stieltjes {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInResolventSet: return "NotInResolventSet";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::NotDecomposable: return "NotDecomposable";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::IdentityResidualExceeded: return "IdentityResidualExceeded";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BadPoint: return "BadPoint";
    case ErrorKind::MembershipViolated: return "MembershipViolated";
    case ErrorKind::CouplingMismatch: return "CouplingMismatch";
    case ErrorKind::NotAnOperator: return "NotAnOperator";
    case ErrorKind::GridDegenerate: return "GridDegenerate";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NotSectorial: return "NotSectorial";
    case ErrorKind::NotNonnegativeSelfadjoint: return "NotNonnegativeSelfadjoint";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IOError: return "IOError";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, double residual)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      residual_(residual) {}

}  // namespace stieltjes
