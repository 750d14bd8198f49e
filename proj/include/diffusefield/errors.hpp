#pragma once

#include <stdexcept>
#include <string>

namespace diffusefield {

enum class ErrorKind { domain, convergence, proximity, parse, config, singular, branch };

const char* to_string(ErrorKind kind);

// Config-type failures map to exit code 1, numeric ones to exit code 2.
bool is_config_kind(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorKind::convergence, what) {}
};

class ProximityError : public Error {
 public:
  explicit ProximityError(const std::string& what) : Error(ErrorKind::proximity, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(ErrorKind::parse, what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double cond)
      : Error(ErrorKind::singular, what), condition_number_(cond) {}
  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

class BranchError : public Error {
 public:
  explicit BranchError(const std::string& what) : Error(ErrorKind::branch, what) {}
};

}  // namespace diffusefield
