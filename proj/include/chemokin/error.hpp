#pragma once

#include <stdexcept>
#include <string>

namespace chemokin {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  Domain,
  Configuration,
  SingularCase,
  Endpoint,
  Integrability,
  Timeout,
  Io,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::Configuration, what) {}
};

class SingularCaseError : public Error {
 public:
  explicit SingularCaseError(const std::string& what)
      : Error(ErrorCode::SingularCase, what) {}
};

/// Raised when a quantity is requested at or beyond a support endpoint where
/// only the power-law asymptotics are meaningful.
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& what)
      : Error(ErrorCode::Endpoint, what) {}
};

class IntegrabilityError : public Error {
 public:
  explicit IntegrabilityError(const std::string& what)
      : Error(ErrorCode::Integrability, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace chemokin
