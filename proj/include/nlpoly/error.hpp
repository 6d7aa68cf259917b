#ifndef NLPOLY_ERROR_HPP
#define NLPOLY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nlpoly {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (zero polynomial, constant input, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Rows of a would-be basis are linearly dependent.
struct RankError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

/// Parameters violate a divisibility or coprimality condition of a construction.
struct ConstructionError : Error {
    using Error::Error;
};

/// Malformed user input (flags, files, requests).
struct InputError : Error {
    using Error::Error;
};

} // namespace nlpoly

#endif // NLPOLY_ERROR_HPP
