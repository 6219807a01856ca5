#pragma once

#include <stdexcept>
#include <string>

namespace pi01 {

enum class ErrorKind {
  not_a_member,
  empty_input,
  consistency,
  precondition,
  resource,
  shape,
  depth,
  format,
  protocol,
  validation,
  domain,
  normalization,
  internal,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI report) can classify it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pi01
