#pragma once

#include <stdexcept>
#include <string>

namespace graphsl {

// Error codes. Validation-class codes map to CLI exit 2, numeric-class to exit 3.
enum class Errc {
  // validation / input
  Disconnected,
  NonRegularMatching,
  BadLength,
  DanglingReference,
  BadInput,
  UnsupportedMatching,
  NotATree,
  RootNotBoundary,
  NotSimpleEdge,
  VertexNotOnEdge,
  LengthMismatch,
  EmptyData,
  InterlacedMismatch,
  ZeroHandling,
  CountMismatch,
  // numerical
  NonFiniteResult,
  ScanTooCoarse,
  ComplexRootDetected,
  EvaluationAtPole,
  MultiplePole,
  ContourTooTight,
  SingularMainEquation,
  NearSingularSystem,
  AllSamplesSingular,
  PoleExtractionFailed,
  InsufficientSamples,
  EigsolveFailure,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::Disconnected: return "Disconnected";
    case Errc::NonRegularMatching: return "NonRegularMatching";
    case Errc::BadLength: return "BadLength";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::BadInput: return "BadInput";
    case Errc::UnsupportedMatching: return "UnsupportedMatching";
    case Errc::NotATree: return "NotATree";
    case Errc::RootNotBoundary: return "RootNotBoundary";
    case Errc::NotSimpleEdge: return "NotSimpleEdge";
    case Errc::VertexNotOnEdge: return "VertexNotOnEdge";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyData: return "EmptyData";
    case Errc::InterlacedMismatch: return "InterlacedMismatch";
    case Errc::ZeroHandling: return "ZeroHandling";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::NonFiniteResult: return "NonFiniteResult";
    case Errc::ScanTooCoarse: return "ScanTooCoarse";
    case Errc::ComplexRootDetected: return "ComplexRootDetected";
    case Errc::EvaluationAtPole: return "EvaluationAtPole";
    case Errc::MultiplePole: return "MultiplePole";
    case Errc::ContourTooTight: return "ContourTooTight";
    case Errc::SingularMainEquation: return "SingularMainEquation";
    case Errc::NearSingularSystem: return "NearSingularSystem";
    case Errc::AllSamplesSingular: return "AllSamplesSingular";
    case Errc::PoleExtractionFailed: return "PoleExtractionFailed";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::EigsolveFailure: return "EigsolveFailure";
  }
  return "Unknown";
}

inline bool errc_is_validation(Errc c) {
  switch (c) {
    case Errc::Disconnected:
    case Errc::NonRegularMatching:
    case Errc::BadLength:
    case Errc::DanglingReference:
    case Errc::BadInput:
    case Errc::UnsupportedMatching:
    case Errc::NotATree:
    case Errc::RootNotBoundary:
    case Errc::NotSimpleEdge:
    case Errc::VertexNotOnEdge:
    case Errc::LengthMismatch:
    case Errc::EmptyData:
    case Errc::InterlacedMismatch:
    case Errc::ZeroHandling:
    case Errc::CountMismatch:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace graphsl
