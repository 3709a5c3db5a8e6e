#pragma once

#include <stdexcept>
#include <string>

namespace ovp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An expression or functional evaluated to NaN or +/-inf.
struct NonFiniteError : Error {
    using Error::Error;
};

/// A sampling box has zero volume in some coordinate.
struct DegenerateBoxError : Error {
    using Error::Error;
};

/// A grid function has fewer than two nodes.
struct EmptyGridError : Error {
    using Error::Error;
};

/// A chord pair (s, t) with s >= t.
struct DegeneratePairError : Error {
    using Error::Error;
};

/// Problem data admits no feasible candidate (e.g. f(a) > A).
struct InfeasibleSpecError : Error {
    using Error::Error;
};

/// Solver hit the iteration cap without reaching the KKT tolerance.
struct MaxIterationsError : Error {
    using Error::Error;
};

/// The truncation tail of a Dini integral exceeds the trust threshold.
struct QuadratureUnderflowError : Error {
    using Error::Error;
};

/// No growth constant M below the search cap satisfies the lower bound.
struct NoSuchMError : Error {
    using Error::Error;
};

/// Scenario file failed to tokenize/parse.
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& what, int line_, int column_)
        : Error(what), line(line_), column(column_) {}
};

/// Scenario parsed but a field is missing or out of range.
struct ValidationError : Error {
    std::string field;
    ValidationError(const std::string& field_, const std::string& what)
        : Error(what), field(field_) {}
};

}  // namespace ovp
