#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsusy {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

enum class EvalFailure { Unbound, Pole, Domain, NonFinite };

class EvalError : public Error {
public:
    EvalError(EvalFailure kind, const std::string& msg) : Error(msg), kind_(kind) {}
    EvalFailure kind() const noexcept { return kind_; }

private:
    EvalFailure kind_;
};

/// Violated input contract (degenerate f, excluded parameter, mismatched variable).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Sample matrix too close to rank deficient for a trustworthy fit.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& msg, double condition) : Error(msg), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace qsusy
