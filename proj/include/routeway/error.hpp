#pragma once

#include <stdexcept>
#include <string>

namespace routeway {

/// Domain error carrying a stable machine-readable code alongside the
/// human-readable message. The CLI prints the code and exits nonzero.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace routeway
