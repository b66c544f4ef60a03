#ifndef LARMOR_SCATTERING_HPP
#define LARMOR_SCATTERING_HPP

// Stationary 1D scattering of one spin channel across a piecewise-constant
// potential, solved with complex 2x2 transfer matrices in the mode basis.
//
// The first-order wave equation matches both spinor components at every
// interface (no derivative matching); interface mixing is governed by the
// component ratio f of each medium, not by the momentum ratio. Evanescent
// growth is factored out of the matrix entries and tracked as a separate
// log-scale so opaque barriers cannot overflow.
//
// The spin-field coupling V acts as a channel-wise energy shift: the channel
// whose amplitudes carry the label "U + s" propagates inside the barrier at
// energy E - s while the asymptotic regions stay at E. Barrier heights U
// themselves add to the mass term.

#include <complex>
#include <functional>
#include <vector>

#include "larmor/quantum_core.hpp"

namespace larmor {

/// 2x2 complex matrix mapping (right-mover, left-mover) amplitudes, stored
/// as entries * exp(log_scale) so evanescent factors stay representable.
struct TransferMatrix {
  Complex m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};
  double log_scale = 0.0;

  static TransferMatrix identity() { return {}; }

  /// Composition: (*this) applied after rhs.
  TransferMatrix operator*(const TransferMatrix& rhs) const;

  /// det of the scaled entries (actual determinant is det() * e^{2 log_scale}).
  Complex det() const { return m00 * m11 - m01 * m10; }

  /// Entries with the scale multiplied back in. Throws Overflow when
  /// log_scale exceeds the double exponent range (|log| > 700).
  TransferMatrix dense() const;
};

/// Propagation across one homogeneous segment in its own mode basis:
/// diag(e^{ipL}, e^{-ipL}) with the growing factor moved into log_scale.
TransferMatrix segment_matrix(const ChannelKinematics& kin, double length);

/// Basis change at an interface from a medium with ratio f_from into one
/// with ratio f_to, enforcing continuity of both spinor components.
TransferMatrix interface_matrix(Complex f_from, Complex f_to);

/// Transmission/reflection amplitudes of one spin channel, normalized so
/// that (1 + f0^2)(|T|^2 + |R|^2) = 1. Phases use the plane-wave convention
/// e^{+ik0 x} incident / transmitted, e^{-ik0 x} reflected.
struct ScatteringResult {
  Complex T;
  Complex R;
  double alpha;  ///< arg(T) in (-pi, pi]
  double beta;   ///< arg(R) in (-pi, pi]
  double f0;
  double shift;  ///< channel potential label: amplitudes of "U + shift"

  double unitarity_residual() const;
};

/// Solves one channel across the barrier. `shift` is the spin-field offset
/// labeling the channel (s = -V for the sigma3 = +1 channel, +V for -1).
ScatteringResult scatter_channel(const PiecewiseBarrier& barrier, double E,
                                 double m, double shift = 0.0);

struct ChannelPair {
  ScatteringResult minus;  ///< channel "U - V" (spin along the field)
  ScatteringResult plus;   ///< channel "U + V" (spin against the field)
  double V;
};

/// Both spin channels; at V = 0 the two results are identical.
ChannelPair scatter_spin(const PiecewiseBarrier& barrier, double E, double m,
                         double V);

/// Wavefunction inside the barrier, segment by segment. Amplitudes are in
/// the local frame of each segment's left edge and normalized to the unit
/// incident coherent state (free region density 1).
struct InteriorField {
  struct SegmentWave {
    double x_left;
    double length;
    Complex A;  ///< right-mover coefficient
    Complex B;  ///< left-mover coefficient
    ChannelKinematics kin;
  };

  double a = 0.0, b = 0.0;
  std::vector<SegmentWave> waves;
  ScatteringResult amplitudes;

  /// rho(x) = |phi|^2 + |chi|^2 at a point inside [a, b].
  double density(double x) const;

  /// Closed-form integral of the density over [a, b] (exponential and
  /// trigonometric antiderivatives per segment; no quadrature).
  double integrated_density() const;
};

InteriorField interior_field(const PiecewiseBarrier& barrier, double E,
                             double m, double shift = 0.0);

/// Independent cross-check: integrates the coupled first-order system
///   phi' = i (E_ch + m + U(x)) chi,   chi' = i (E_ch - m - U(x)) phi
/// right to left from a pure transmitted wave with an adaptive controlled
/// stepper, then extracts T and R from the asymptotic decomposition.
/// Works on the smooth profile directly (no discretization).
ScatteringResult ode_oracle(const BarrierProfile& profile, double E, double m,
                            double shift = 0.0);

/// Oracle variant for an already-discretized barrier.
ScatteringResult ode_oracle(const PiecewiseBarrier& barrier, double E,
                            double m, double shift = 0.0);

}  // namespace larmor

#endif
