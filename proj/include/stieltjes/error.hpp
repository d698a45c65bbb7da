#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace stieltjes {

enum class ErrorKind {
  NotPSD,
  DimensionMismatch,
  NotInResolventSet,
  IllConditioned,
  EmptyDomain,
  NotDecomposable,
  NotContraction,
  ShapeMismatch,
  NotHermitian,
  IdentityResidualExceeded,
  NoConvergence,
  BadPoint,
  MembershipViolated,
  CouplingMismatch,
  NotAnOperator,
  GridDegenerate,
  BoundViolated,
  HypothesisViolated,
  NotSectorial,
  NotNonnegativeSelfadjoint,
  SignViolation,
  PoleHit,
  ParseError,
  IOError,
  OutsideDomain,
  Unsupported,
};

const char* to_string(ErrorKind kind);

// Every failure in the library is reported through this one type. The
// residual is the offending number when there is one (NaN otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        double residual = std::numeric_limits<double>::quiet_NaN());

  ErrorKind kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

}  // namespace stieltjes
