#ifndef IMSPELAB_ERRORS_HPP
#define IMSPELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace imspelab {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument to a numeric operation (negative sqrt, non-finite erf input,
// nonpositive covariance parameter, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Factorization hit a pivot below the zero threshold, or the solve residual
// could not be certified. Signals the caller to escalate precision.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& msg, double pivot_magnitude)
        : Error(msg), pivot(pivot_magnitude) {}
    double pivot;
};

// Precision escalation reached the context ceiling without a certified value.
class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& msg, int digits_reached, double min_pivot_seen)
        : Error(msg), digits(digits_reached), min_pivot(min_pivot_seen) {}
    int digits;
    double min_pivot;
};

// Two non-twin design points coincide exactly; no delta information to resolve.
class DegenerateDesignError : public Error {
public:
    explicit DegenerateDesignError(const std::string& msg) : Error(msg) {}
};

// Malformed input file. line == 0 when no line applies.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line_number = 0)
        : Error(msg), line(line_number) {}
    int line;
};

// Operation asked for an unsupported configuration (e.g. classifying N != 4).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

} // namespace imspelab

#endif
