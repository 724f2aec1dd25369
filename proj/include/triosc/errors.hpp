// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace triosc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hamiltonian matrix is not positive-definite (unbounded potential)
struct PositivityError : Error { using Error::Error; };

// the square root inside the branch quantity R has a negative argument
struct BranchUndefined : Error { using Error::Error; };

// parameters do not lie on the requested NS manifold
struct NotOnManifold : Error { using Error::Error; };

// tuned/derived quantity is unphysical (non-positive frequency, lost positivity)
struct NonPhysical : Error { using Error::Error; };

// a tuning target requires a parameter symmetry the inputs do not have
struct SymmetryViolated : Error { using Error::Error; };

// some normal-mode frequency is at or above the bath cutoff
struct CutoffViolation : Error { using Error::Error; };

// state passed in the wrong basis (natural vs normal)
struct BasisMismatch : Error { using Error::Error; };

// oscillator index outside {1,2,3} or repeated pair index
struct IndexError : Error { using Error::Error; };

// numerically inconsistent input (non-physical covariance, negative radicand)
struct NumericalError : Error { using Error::Error; };

// time window not covered by a series, or too few samples in it
struct WindowError : Error { using Error::Error; };

// parameters outside the validity window of a closed form
struct RegimeError : Error { using Error::Error; };

// malformed CLI/config input
struct ConfigError : Error { using Error::Error; };

} // namespace triosc
