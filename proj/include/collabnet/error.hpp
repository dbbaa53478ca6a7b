#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace collabnet {

enum class ErrorCode {
  io,
  parse,
  identifier,
  duplicate_identifier,
  shape,
  degenerate_input,
  separation,
  rank_deficient,
  non_convergence,
  config,
  spec,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; the code maps one-to-one
// onto the C API status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace collabnet
