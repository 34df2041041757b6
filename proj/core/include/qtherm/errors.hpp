#pragma once

#include <stdexcept>
#include <string>

namespace qtherm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input matrix fails the hermiticity/trace checks of a density operator.
struct NotAState : Error {
    using Error::Error;
};

/// |h| too small: the energy eigenbasis (or a division by h) is undefined.
struct DegenerateHamiltonian : Error {
    using Error::Error;
};

/// Entropy-based rate requested at (numerically) zero purity.
struct PurityZero : Error {
    using Error::Error;
};

struct GridTooCoarse : Error {
    using Error::Error;
};

/// 0/0 limit, e.g. the non-dissipative heat with C = C0 = 0 and U = 0.
struct UndefinedLimit : Error {
    using Error::Error;
};

/// Adaptive quadrature could not reach tolerance within its subdivision budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

/// The master-equation integrator exceeded its substep budget.
struct StepSizeUnderflow : Error {
    using Error::Error;
};

/// The monotonicity direction for a functional is undefined (e.g. sgn U = 0).
struct SignAmbiguous : Error {
    using Error::Error;
};

}  // namespace qtherm
