#pragma once

#include <stdexcept>
#include <string>

namespace lcs {

enum class ErrorKind {
  Format,
  Validation,
  Data,
  OutOfRange,
  OutOfDomain,
  Escape,
  Divergence,
  Unavailable,
  Degenerate,
  EmptyLine,
  PartialData,
  EmptyField,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Trajectory left a non-periodic domain; carries the time of the last
// accepted position that was still inside.
class EscapeError : public Error {
 public:
  EscapeError(double exit_time, const std::string& what)
      : Error(ErrorKind::Escape, what), exit_time_(exit_time) {}
  double exit_time() const noexcept { return exit_time_; }

 private:
  double exit_time_;
};

}  // namespace lcs
