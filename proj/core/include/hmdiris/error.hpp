#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmdiris {

enum class ErrorCode {
  FileMissing,
  ImageFormat,
  DimensionMismatch,
  IllegalLabelValue,
  NoPupil,
  NoIris,
  DegenerateGeometry,
  ParamMismatch,
  EncoderMismatch,
  LengthMismatch,
  InsufficientOverlap,
  TemplateFormat,
  SessionTooShort,
  EmptyPool,
  EmptyScores,
  NoQualifyingThreshold,
  InvalidScore,
  InvalidConfig,
  DatasetNotFound,
  MissingPreparedData,
  MissingScores,
  Io,
};

/// Stable tag for an error code, used in CSV `error` columns and logs.
std::string_view error_tag(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_tag(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmdiris
