#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roadsense {

enum class ErrorCode {
  invalid_sample,
  configuration,
  shape,
  index,
  insufficient_data,
  degenerate_fit,
  domain,
  no_location,
  no_speed,
  format,
  corrupt_file,
  ordering,
  scenario,
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_sample: return "invalid-sample";
    case ErrorCode::configuration: return "configuration";
    case ErrorCode::shape: return "shape";
    case ErrorCode::index: return "index";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::degenerate_fit: return "degenerate-fit";
    case ErrorCode::domain: return "domain";
    case ErrorCode::no_location: return "no-location";
    case ErrorCode::no_speed: return "no-speed";
    case ErrorCode::format: return "format";
    case ErrorCode::corrupt_file: return "corrupt-file";
    case ErrorCode::ordering: return "ordering";
    case ErrorCode::scenario: return "scenario";
  }
  return "unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace roadsense
