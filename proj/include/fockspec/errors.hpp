#ifndef FOCKSPEC_ERRORS_HPP
#define FOCKSPEC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockspec/rational.hpp"

namespace fockspec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exponent exceeded the configured degree cap.
class DegreeOverflow : public Error {
public:
    DegreeOverflow(std::size_t exponent, std::size_t cap)
        : Error("degree overflow: exponent " + std::to_string(exponent) + " exceeds cap " +
                std::to_string(cap)),
          exponent(exponent), cap(cap) {}
    std::size_t exponent;
    std::size_t cap;
};

/// A subspace that was expected to be invariant is not. Carries the first offending
/// column and its overflow coefficients (indexed by absolute degree).
class LeakageError : public Error {
public:
    LeakageError(std::size_t column, std::vector<Rational> overflow)
        : Error("subspace not invariant: column " + std::to_string(column) + " leaks"),
          column(column), overflow(std::move(overflow)) {}
    std::size_t column;
    std::vector<Rational> overflow;
};

class NotExactlySolvable : public Error {
public:
    NotExactlySolvable() : Error("operator is not exactly-solvable (some term has b-degree > a-degree)") {}
};

class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(Rational residual)
        : Error("constraint violated, residual " + to_string(residual)), residual(std::move(residual)) {}
    Rational residual;
};

/// Raised by complex fiber assembly when the basis {b^k z^m} turns out dependent.
/// That cannot happen mathematically, so it signals a bug.
class SingularBasis : public Error {
public:
    using Error::Error;
};

/// A parameter binding is missing or has an unusable value.
class BindingError : public Error {
public:
    using Error::Error;
};

class UnboundParameter : public BindingError {
public:
    explicit UnboundParameter(std::string name)
        : BindingError("unbound parameter '" + name + "'"), name(std::move(name)) {}
    std::string name;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position(position) {}
    std::size_t position;
};

}  // namespace fockspec

#endif  // FOCKSPEC_ERRORS_HPP
