#include "hmdiris/error.hpp"

namespace hmdiris {

std::string_view error_tag(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileMissing: return "FileMissing";
    case ErrorCode::ImageFormat: return "ImageFormat";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IllegalLabelValue: return "IllegalLabelValue";
    case ErrorCode::NoPupil: return "NoPupil";
    case ErrorCode::NoIris: return "NoIris";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::ParamMismatch: return "ParamMismatch";
    case ErrorCode::EncoderMismatch: return "EncoderMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::TemplateFormat: return "TemplateFormat";
    case ErrorCode::SessionTooShort: return "SessionTooShort";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::NoQualifyingThreshold: return "NoQualifyingThreshold";
    case ErrorCode::InvalidScore: return "InvalidScore";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DatasetNotFound: return "DatasetNotFound";
    case ErrorCode::MissingPreparedData: return "MissingPreparedData";
    case ErrorCode::MissingScores: return "MissingScores";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hmdiris
