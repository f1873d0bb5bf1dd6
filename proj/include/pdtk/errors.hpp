#pragma once

#include <stdexcept>
#include <string>

namespace pdtk {

enum class ErrorCode {
  InvalidArgument,
  NegativeWeight,
  SumNotOne,
  GridTooNarrow,
  NonPositiveSigma,
  AlphabetMismatch,
  MissingValues,
  InfeasibleDistortion,
  TooLarge,
  NotApplicable,
  InvertibleDegradation,
  DuplicateName,
  IoFailure,
  ZeroA,
  NonMonotoneRegion,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pdtk
