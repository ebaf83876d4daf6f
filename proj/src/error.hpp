#pragma once

#include <stdexcept>
#include <string>

namespace fot {

enum class ErrorKind {
  InvalidArgument,
  Range,
  MalformedStream,
  Format,
  Backend,
  UnsupportedBackend,
  VocabResolution,
  Io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, std::string msg) {
  throw Error(kind, std::move(msg));
}

}  // namespace fot
