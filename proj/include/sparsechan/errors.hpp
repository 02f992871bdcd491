#pragma once

#include <stdexcept>
#include <string>

namespace sparsechan {

// Bad sizes: empty matrices, mismatched products, K exceeding signal length.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Arguments outside the mathematical domain of an operation
// (S > N, negative sigma, non-positive lambda, zero channel, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Singular or degenerate linear systems (zero-norm column, collinear xs).
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative method failed to meet its tolerance within the iteration cap.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterate left the finite range (signals an under-estimated spectral bound).
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// LP solver certified that no feasible point exists.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config file could not be parsed or violates an invariant.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sparsechan
