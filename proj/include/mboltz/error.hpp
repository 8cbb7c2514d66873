#pragma once

#include <stdexcept>
#include <string>

namespace mboltz {

/// Failure categories; the numeric values double as CLI exit codes.
enum class ErrorKind : int { config = 2, numerical = 3, io = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// Raised by closed-form angular integrals at rho = 0 or p + q = 0.
class DegenerateConfiguration : public NumericalError {
 public:
  explicit DegenerateConfiguration(const std::string& what) : NumericalError(what) {}
};

}  // namespace mboltz
