#pragma once
// Error taxonomy shared by the core library, the C API and the CLI.

#include <stdexcept>
#include <string>

namespace eprb {

enum class ErrorCode {
  argument,     // malformed or out-of-range input value
  domain,       // input outside a function's mathematical domain
  boundary,     // measurement landed on a stripe edge within tolerance
  consumed,     // single-use object measured twice
  any_all,      // a pair was asked for more values than one run can carry
  mode,         // operation not available in the requested evaluation mode
  consistency,  // supplied probabilities fail a required identity
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ArgumentError final : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(ErrorCode::argument, what) {}
};

class DomainError final : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::domain, what) {}
};

class BoundaryError final : public Error {
 public:
  explicit BoundaryError(const std::string& what)
      : Error(ErrorCode::boundary, what) {}
};

class ConsumedError final : public Error {
 public:
  explicit ConsumedError(const std::string& what)
      : Error(ErrorCode::consumed, what) {}
};

class AnyAllViolation final : public Error {
 public:
  explicit AnyAllViolation(const std::string& what)
      : Error(ErrorCode::any_all, what) {}
};

class ModeError final : public Error {
 public:
  explicit ModeError(const std::string& what) : Error(ErrorCode::mode, what) {}
};

class ConsistencyError final : public Error {
 public:
  explicit ConsistencyError(const std::string& what)
      : Error(ErrorCode::consistency, what) {}
};

}  // namespace eprb
