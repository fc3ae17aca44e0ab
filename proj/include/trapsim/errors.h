#ifndef TRAPSIM_ERRORS_H
#define TRAPSIM_ERRORS_H

#include <stdexcept>
#include <string>

namespace trapsim {

/// Register names collide, are missing, or do not partition the qubits.
struct LayoutError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operand dimensions disagree.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A value violates a stated invariant (norm, unitarity, trace, smoothness, ...).
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A request exceeds the configured simulation size.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace trapsim

#endif
