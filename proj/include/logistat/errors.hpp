#pragma once

#include <stdexcept>
#include <string>

namespace logistat {

enum class ErrorKind {
  InvalidInput,
  RefinementExhausted,
  EnclosureBlowup,
  Undecidable,
  BranchLost,
  MultiplierInconclusive,
  ContractionInconclusive,
  NoSignChange,
  MonotonicityViolation,
  NotFound,
  SeparationImpossible,
  NoCycleFound,
  SpreadingFailed,
  ToleranceInfeasible,
  WindowCollapse,
  NonMonotoneKneading,
  TunerFailure,
  VerificationFailed,
};

const char* to_string(ErrorKind k);

// 2 invalid input, 3 precision exhausted, 4 search failure, 5 verification failure
int exit_code(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace logistat
