#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gw {

// Base of every error thrown by the library. kind() is a stable, machine
// readable tag used by the CLI and the HTTP layer.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidGeometry : public Error {
 public:
  explicit InvalidGeometry(const std::string& m) : Error("invalid-geometry", m) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& m);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& m);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DimensionError : public Error {
 public:
  DimensionError(std::string_view op, const std::string& m);
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error("numeric", m) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& m) : Error("insufficient-data", m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

class ProtocolError : public Error {
 public:
  ProtocolError(std::string reason, const std::string& m)
      : Error("protocol", m), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& m) : Error("not-found", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace gw
