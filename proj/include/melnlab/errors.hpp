#pragma once

#include <stdexcept>
#include <string>

namespace melnlab {

// Invalid user input (bad coefficients, unknown JSON keys, out-of-range orders).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (r <= 0, t outside a sector).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical-quality failure: non-convergence, tangency, escape, budget exhaustion.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested data depends on a quantity that has not been computed yet.
struct SequencingError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace melnlab
