#include "gw/core/error.hpp"

namespace gw {

ParseError::ParseError(std::size_t line, const std::string& m)
    : Error("parse", "line " + std::to_string(line) + ": " + m), line_(line) {}

ValidationError::ValidationError(std::string field, const std::string& m)
    : Error("validation", field + ": " + m), field_(std::move(field)) {}

DimensionError::DimensionError(std::string_view op, const std::string& m)
    : Error("dimension", std::string(op) + ": " + m) {}

}  // namespace gw
