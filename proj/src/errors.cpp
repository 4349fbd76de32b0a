#include "biomaudit/errors.hpp"

namespace biomaudit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::DuplicatePair: return "DuplicatePair";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::UnknownSample: return "UnknownSample";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::EmptyJoin: return "EmptyJoin";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::DegenerateBox: return "DegenerateBox";
    case ErrorKind::WriteError: return "WriteError";
    case ErrorKind::NoPredictions: return "NoPredictions";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::TooManyFeatures: return "TooManyFeatures";
    case ErrorKind::EmptyBackground: return "EmptyBackground";
    case ErrorKind::UnknownFeature: return "UnknownFeature";
    case ErrorKind::MissingTier: return "MissingTier";
    case ErrorKind::ConstantPool: return "ConstantPool";
    case ErrorKind::MissingUpstream: return "MissingUpstream";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace biomaudit
