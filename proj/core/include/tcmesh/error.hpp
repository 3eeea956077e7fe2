#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcmesh {

enum class ErrorCode {
  parse_error,
  balance_missing,
  no_usable_customers,
  degenerate_denominator,
  degenerate_variance,
  insufficient_data,
  empty_input,
  invalid_argument,
  io_error,
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tcmesh
