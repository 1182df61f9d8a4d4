#pragma once

#include <stdexcept>

namespace grimlab {

// Chart point outside the admissible parameter domain (or a stencil left it).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First derivatives fail to span an n-plane (degenerate metric).
struct ImmersionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller-supplied argument violates a precondition.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ODE stepper failure (step underflow, non-finite state).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cost guard tripped on a brute-force evaluation.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inversion bracket not found below the configured table ceiling.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative eigensolve failed to converge.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |A| vanishes where a curvature ratio or its scalar inequality is requested.
struct VanishingCurvature : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace grimlab
