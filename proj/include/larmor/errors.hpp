#ifndef LARMOR_ERRORS_HPP
#define LARMOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace larmor {

/// Base class for all solver-level failures.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// E coincides with the band edge of a segment: |E^2 - (m+W)^2| degenerate.
struct ThresholdEnergy : Error {
  using Error::Error;
};

/// Asymptotic energy at or below rest energy; no propagating incident wave.
struct SubRestEnergy : Error {
  using Error::Error;
};

/// Ill-formed barrier description (non-positive width, non-finite height).
struct MalformedProfile : Error {
  using Error::Error;
};

/// Unscaled transfer-matrix entry would exceed the double exponent range.
struct Overflow : Error {
  using Error::Error;
};

/// Adaptive integrator could not meet its tolerance.
struct IntegratorFailure : Error {
  using Error::Error;
};

/// |R|^2 below threshold at a transmission resonance; reflection phase undefined.
struct ReflectionVanishes : Error {
  using Error::Error;
};

/// Finite-difference step fails the step-halving consistency check.
struct StepTooLarge : Error {
  using Error::Error;
};

/// Rectangular closed form requested outside the evanescent regime.
struct NotEvanescent : Error {
  using Error::Error;
};

/// Spin pointing along z: azimuthal precession angle undefined.
struct PoleOrientation : Error {
  using Error::Error;
};

/// f0 -> 1: the precession ellipse degenerates and s2 cannot be rescaled.
struct UltraRelativisticDegeneracy : Error {
  using Error::Error;
};

}  // namespace larmor

#endif
