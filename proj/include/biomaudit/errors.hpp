#pragma once

#include <stdexcept>
#include <string>

namespace biomaudit {

enum class ErrorKind {
  MissingFile,
  ParseError,
  DuplicateId,
  DuplicatePair,
  WrongArity,
  UnknownSample,
  DecodeError,
  UnsupportedFormat,
  EmptyJoin,
  TooSmall,
  DegenerateGeometry,
  DegenerateBox,
  WriteError,
  NoPredictions,
  EmptyClass,
  DegenerateBaseline,
  EmptySelection,
  TooFewSamples,
  TooManyFeatures,
  EmptyBackground,
  UnknownFeature,
  MissingTier,
  ConstantPool,
  MissingUpstream,
  InvalidConfig,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the toolkit; the CLI maps `kind()` to an exit
/// code and a machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace biomaudit
