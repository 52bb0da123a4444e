#pragma once
#include <stdexcept>
#include <string>

namespace driftlab {

// Base class for every failure this library raises on purpose.  Each
// condition gets its own type so tests and the CLI can react precisely.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature node produced NaN/Inf.  Usually means a singular integrand
// was sampled without polar refinement.
struct NonFiniteSample : Error { using Error::Error; };

// A pointwise evaluation (derivative, residual, FD probe) was requested on
// or numerically too close to the field's singular set.
struct SingularProbe : Error { using Error::Error; };

// Dimension override incompatible with the requested construction.
struct BadDimension : Error { using Error::Error; };

// Point outside the domain of definition.
struct OutOfDomain : Error { using Error::Error; };

// Parameter violates a documented precondition (named in the message).
struct ParamOutOfRange : Error { using Error::Error; };

// Bisection bracket does not contain the target (Orlicz norm).
struct BracketFailure : Error { using Error::Error; };

// Test function support sticks out of the integration domain.
struct SupportViolation : Error { using Error::Error; };

// A field that must be divergence-free fails the FD divergence probe.
struct NotDivergenceFree : Error { using Error::Error; };

// Drift evaluation produced NaN/Inf on the grid.
struct NonFiniteDrift : Error { using Error::Error; };

// Grid spacing too coarse for the requested boundary-layer width.
struct GridTooCoarse : Error { using Error::Error; };

// Fixed-point iteration expands instead of contracting.
struct ContractionFailure : Error { using Error::Error; };

// Krylov solve hit max_iter; message carries the partial residual.
struct NoConvergence : Error { using Error::Error; };

}  // namespace driftlab
