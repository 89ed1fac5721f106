#pragma once

// Exception taxonomy for the library.  Every failure mode that callers are
// expected to handle programmatically gets its own type; all derive from
// wsurf::Error so a single catch suffices at tool boundaries.

#include <stdexcept>
#include <string>

namespace wsurf {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A requested evaluation leaves the validity interval of a Weingarten pair,
// or hits a pole (|f-g| below the singular tolerance).
struct DomainError : Error {
  using Error::Error;
};

// Supplied fundamental forms are not in principal parameters (F or M too
// large) for an operation that requires them.
struct NotPrincipalError : Error {
  using Error::Error;
};

// A starred operator or a substitution needs 1/lambda (or F(lambda) in an
// injective range) and the field passes through the excluded value.
struct SingularFieldError : Error {
  using Error::Error;
};

// Iterative solver exhausted its budget.  Carries the best residual seen so
// callers can distinguish "diverged" from "slow".
struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& what, double best_residual_, int iterations_)
      : Error(what), best_residual(best_residual_), iterations(iterations_) {}
  double best_residual;
  int iterations;
};

// Hyperbolic marching called with a step ratio violating the stability bound.
struct CflError : Error {
  using Error::Error;
};

// Invariant data fails the integrability equations beyond tolerance, so no
// surface can be integrated from it.
struct CompatibilityError : Error {
  using Error::Error;
};

// Moving-frame integration lost orthonormality faster than renormalization
// is allowed to repair.
struct FrameDriftError : Error {
  using Error::Error;
};

// A parallel offset a hits 1 - a*nu = 0 (or 1 - a*f, 1 - a*g) on the data.
struct SingularOffsetError : Error {
  using Error::Error;
};

// A degenerate linear curvature relation (alpha^2 - beta^2 + 4*gamma*delta
// = 0) offered to a parallel-family coefficient transformation.
struct DegenerateRelationError : Error {
  using Error::Error;
};

// A degenerate relation where no basic class applies: alpha^2 - beta^2 +
// 4*gamma*delta = 0, equivalently BC - AD = 0 in the fractional form.
struct DegenerateError : Error {
  using Error::Error;
};

// The totally umbilic case (A=D, B=C=0), excluded from classification.
struct UmbilicError : Error {
  using Error::Error;
};

// A class parameter outside its admissible range (e.g. p^2<1 required).
struct ParamError : Error {
  using Error::Error;
};

// Malformed CLI usage or config input.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace wsurf
