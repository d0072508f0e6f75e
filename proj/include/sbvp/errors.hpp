#pragma once

#include <stdexcept>
#include <string>

namespace sbvp {

// Argument outside an operation's mathematical domain (nonpositive gamma
// argument, t outside a sampled range, nonpositive solution value, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature met a non-finite sample; carries the offending node.
class SingularSampleError : public std::runtime_error {
public:
    SingularSampleError(const std::string& msg, double node)
        : std::runtime_error(msg), node_(node) {}
    double node() const { return node_; }

private:
    double node_;
};

// Lexing/parsing failure with a byte position into the source text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Expression evaluation hit a real-arithmetic domain violation (division by
// zero, 0^negative, log of nonpositive, negative base with fractional
// exponent, unbound identifier). Quadrature treats these as singular samples.
class EvalDomainError : public std::runtime_error {
public:
    explicit EvalDomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (grid size, tolerances, clamp with R <= 1/m, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Forcing data failed the integrability precondition of the linear solve.
class IllPosedDataError : public std::runtime_error {
public:
    explicit IllPosedDataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem-file schema violation; names the offending field.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& field, const std::string& msg)
        : std::runtime_error("field '" + field + "': " + msg), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace sbvp
