#pragma once

#include <stdexcept>
#include <string>

namespace depkern {

enum class ErrorKind {
  invalid_argument,
  unknown_kernel,
  io,
  parse,
  format,
  ties,
  sample_too_small,
  too_large,
  quadrature,
  config,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace depkern
