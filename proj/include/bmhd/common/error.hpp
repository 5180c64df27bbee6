#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmhd {

enum class ErrorKind {
  Dimension,
  Domain,
  Precondition,
  Input,
  State,
  Numeric,
  BlowUp,
  InsufficientSignal,
  Window,
  PoorFit,
  Config,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace bmhd
