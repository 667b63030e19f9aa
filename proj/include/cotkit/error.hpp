#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cotkit {

/// Failure categories surfaced to callers and to the CLI error summary.
enum class ErrorCode {
  usage,
  config,
  io,
  parse,
  incomplete,
  bad_class,
  duplicate,
  bad_kind,
  no_conclusions,
  not_found,
  range,
  incomplete_judgments,
  join,
  sequential,
  invalid_tree,
  service,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cotkit
