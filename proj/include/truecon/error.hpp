#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace truecon {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Structurally broken model (dangling ids, reflexive independence, duplicate triples).
class ModelError : public Error {
public:
    using Error::Error;
};

class UnsafeNet : public Error {
public:
    UnsafeNet(std::string marking, std::string action)
        : Error("unsafe net: firing " + action + " at marking " + marking + " double-marks a place"),
          marking_(std::move(marking)), action_(std::move(action)) {}

    [[nodiscard]] const std::string& marking() const noexcept { return marking_; }
    [[nodiscard]] const std::string& action() const noexcept { return action_; }

private:
    std::string marking_;
    std::string action_;
};

class StateExplosion : public Error {
public:
    explicit StateExplosion(std::size_t cap)
        : Error("state space exceeds cap of " + std::to_string(cap)), cap_(cap) {}
    [[nodiscard]] std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

// Folding gave up: the generator probably is not regular.
class CapExceeded : public Error {
public:
    explicit CapExceeded(std::size_t cap)
        : Error("class/configuration count exceeds cap of " + std::to_string(cap)), cap_(cap) {}
    [[nodiscard]] std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

class NotARun : public Error {
public:
    using Error::Error;
};

class FormulaError : public Error {
public:
    using Error::Error;
};

class UnboundVariable : public FormulaError {
public:
    explicit UnboundVariable(const std::string& var)
        : FormulaError("unbound variable " + var), var_(var) {}
    [[nodiscard]] const std::string& variable() const noexcept { return var_; }

private:
    std::string var_;
};

class OpenFormula : public FormulaError {
public:
    explicit OpenFormula(const std::string& var)
        : FormulaError("free variable " + var + " has no valuation"), var_(var) {}
    [[nodiscard]] const std::string& variable() const noexcept { return var_; }

private:
    std::string var_;
};

class NotLmuFragment : public FormulaError {
public:
    using FormulaError::FormulaError;
};

class IllegalMove : public Error {
public:
    IllegalMove(std::size_t position, const std::string& input)
        : Error("illegal move '" + input + "' at play position " + std::to_string(position)) {}
};

class NotAcyclic : public Error {
public:
    using Error::Error;
};

class NotXi : public Error {
public:
    using Error::Error;
};

class FragmentViolation : public Error {
public:
    FragmentViolation(std::string kind, const std::string& detail)
        : Error("fragment violation (" + kind + "): " + detail), kind_(std::move(kind)) {}
    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace truecon
