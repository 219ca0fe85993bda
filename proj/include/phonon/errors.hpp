#pragma once

#include <stdexcept>

namespace phonon {

// Common base so callers can catch everything from this library at once.
// The CLI maps subtypes onto exit codes (config -> 2, numerics -> 3, io -> 4).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };       // argument outside its physical domain
struct SizingError : Error { using Error::Error; };       // dimension cap exceeded
struct MembershipError : Error { using Error::Error; };   // state does not belong to a sector
struct RangeError : Error { using Error::Error; };        // ordinal / site index out of range
struct DimensionError : Error { using Error::Error; };    // vector vs operator dimension mismatch
struct InputError : Error { using Error::Error; };        // malformed input values
struct ConvergenceError : Error { using Error::Error; };  // iterative solver gave up
struct ConfigError : Error { using Error::Error; };       // configuration parsing / validation
struct IoError : Error { using Error::Error; };           // filesystem failures

}  // namespace phonon
