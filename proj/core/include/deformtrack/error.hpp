#pragma once

#include <stdexcept>
#include <string>

namespace deformtrack {

enum class ErrorKind {
  Configuration,
  InvalidInput,
  SegmentationFailed,
  ClassificationFailed,
  DetectionFailed,
  TopologyFailed,
  Internal,
};

const char* to_string(ErrorKind kind);

/// Exception type thrown by every pipeline stage. `stage()` names the step
/// that failed (e.g. "clustering", "skeleton") so callers can report it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& message)
      : std::runtime_error(stage.empty() ? message : stage + ": " + message), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration:
      return "configuration";
    case ErrorKind::InvalidInput:
      return "invalid-input";
    case ErrorKind::SegmentationFailed:
      return "segmentation-failed";
    case ErrorKind::ClassificationFailed:
      return "classification-failed";
    case ErrorKind::DetectionFailed:
      return "detection-failed";
    case ErrorKind::TopologyFailed:
      return "topology-failed";
    case ErrorKind::Internal:
      return "internal";
  }
  return "unknown";
}

}  // namespace deformtrack
