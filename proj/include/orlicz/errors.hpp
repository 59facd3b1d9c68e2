#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orlicz {

enum class ErrorCode {
  InvalidResolution,
  DimensionMismatch,
  NonFiniteIntegrand,
  InvalidBody,
  OriginNotInterior,
  UnsupportedDimension,
  MissingCurvature,
  NotConvexProfile,
  NotUnimodular,
  DegenerateSample,
  DomainError,
  RangeError,
  ClassificationConflict,
  NearDegenerate,
  IncompatibleGrids,
  UnclassifiedPhi,
  PEqualsMinusN,
  MixedClassConflict,
  UnknownSuite,
  ClassMismatch,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace orlicz
