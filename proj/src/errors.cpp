#include "logistat/errors.hpp"

namespace logistat {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::RefinementExhausted: return "RefinementExhausted";
    case ErrorKind::EnclosureBlowup: return "EnclosureBlowup";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::BranchLost: return "BranchLost";
    case ErrorKind::MultiplierInconclusive: return "MultiplierInconclusive";
    case ErrorKind::ContractionInconclusive: return "ContractionInconclusive";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::SeparationImpossible: return "SeparationImpossible";
    case ErrorKind::NoCycleFound: return "NoCycleFound";
    case ErrorKind::SpreadingFailed: return "SpreadingFailed";
    case ErrorKind::ToleranceInfeasible: return "ToleranceInfeasible";
    case ErrorKind::WindowCollapse: return "WindowCollapse";
    case ErrorKind::NonMonotoneKneading: return "NonMonotoneKneading";
    case ErrorKind::TunerFailure: return "TunerFailure";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput:
      return 2;
    case ErrorKind::RefinementExhausted:
    case ErrorKind::EnclosureBlowup:
    case ErrorKind::Undecidable:
    case ErrorKind::BranchLost:
    case ErrorKind::MultiplierInconclusive:
    case ErrorKind::ContractionInconclusive:
      return 3;
    case ErrorKind::VerificationFailed:
      return 5;
    default:
      return 4;
  }
}

}  // namespace logistat
