#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qcp {

// Base type for all library errors. Every error carries a stable
// machine-readable code so the CLI can map failures to diagnostics
// without parsing free-form messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define QCP_DEFINE_ERROR(NAME, CODE)                            \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& message)                   \
        : Error(CODE, message) {}                               \
  }

QCP_DEFINE_ERROR(InvalidSpec, "invalid-spec");
QCP_DEFINE_ERROR(DimensionMismatch, "dimension-mismatch");
QCP_DEFINE_ERROR(ZeroVector, "zero-vector");
QCP_DEFINE_ERROR(NonHermitian, "non-hermitian");
QCP_DEFINE_ERROR(NonFinitePotential, "non-finite-potential");
QCP_DEFINE_ERROR(OrthogonalConditions, "orthogonal-conditions");
QCP_DEFINE_ERROR(ZeroReferenceOverlap, "zero-reference-overlap");
QCP_DEFINE_ERROR(ForbiddenRegion, "forbidden-region");
QCP_DEFINE_ERROR(NoAllowedRegion, "no-allowed-region");
QCP_DEFINE_ERROR(OpenOrbit, "open-orbit");
QCP_DEFINE_ERROR(GuardViolation, "wrap-around-guard");
QCP_DEFINE_ERROR(NoAdmissibleRegion, "no-admissible-region");
QCP_DEFINE_ERROR(TooFewSamples, "too-few-accepted-trials");
QCP_DEFINE_ERROR(InvalidArgument, "invalid-argument");
QCP_DEFINE_ERROR(NumericFailure, "numeric-failure");
QCP_DEFINE_ERROR(ConfigError, "config-error");
QCP_DEFINE_ERROR(IoError, "io-error");

#undef QCP_DEFINE_ERROR

}  // namespace qcp
