#ifndef LARMOR_QUANTUM_CORE_HPP
#define LARMOR_QUANTUM_CORE_HPP

// Unit conventions, particle/field parameters, spin coherent states,
// per-segment kinematics and barrier profiles.
//
// Natural units throughout: hbar = c = 1, energies in units of mc^2,
// lengths in hbar/(mc), times in hbar/(mc^2). SI conversion is a pure
// display-layer multiplication (see tools/).

#include <array>
#include <complex>
#include <variant>
#include <vector>

#include "larmor/errors.hpp"

namespace larmor {

using Complex = std::complex<double>;

/// Four-component spinor, components ordered (upper-up, upper-down,
/// lower-down, lower-up) following the column structure of the
/// asymptotic scattering states.
using FourSpinor = std::array<Complex, 4>;

/// Asymptotic particle data for total energy E and rest mass m.
struct ParticleState {
  double E;   ///< total energy, E > m strictly
  double m;   ///< rest mass, m > 0
  double k0;  ///< asymptotic momentum sqrt(E^2 - m^2)
  double f0;  ///< lower/upper component ratio k0 / (m + E), in (0, 1)

  static ParticleState make(double E, double m = 1.0);
};

/// Spin-field interaction confined to the barrier region.
struct FieldParams {
  double V = 0.0;  ///< interaction energy, V = hbar * omega_L / 2 = mu B

  double omega_L() const { return 2.0 * V; }  // natural units
};

/// Polarization direction of the incident spin coherent state.
struct SpinOrientation {
  double theta = 0.0;  ///< polar angle in [0, pi]
  double phi = 0.0;    ///< azimuthal angle in [0, 2pi)

  Complex u1() const;  ///< cos(theta/2) e^{-i phi/2}
  Complex u2() const;  ///< sin(theta/2) e^{+i phi/2}
};

/// One piecewise-constant potential segment.
struct Segment {
  double length;  ///< > 0
  double height;  ///< finite, may be negative
};

/// Piecewise-constant discretization of a barrier on [a, b].
struct PiecewiseBarrier {
  double a = 0.0;
  double b = 0.0;
  std::vector<Segment> segments;

  double total_length() const { return b - a; }
};

/// Arbitrary finite-support scalar potential U(x) on [a, b]; U = 0 outside.
class BarrierProfile {
 public:
  struct Rectangular {
    double U0;  ///< height, > 0
    double d;   ///< half width, > 0; support is [-d, +d]
  };
  struct Piecewise {
    std::vector<Segment> segments;
  };
  struct Sampled {
    std::vector<double> x;  ///< strictly increasing sample positions
    std::vector<double> U;  ///< sampled heights, linearly interpolated
  };

  static BarrierProfile rectangular(double U0, double d);
  static BarrierProfile piecewise(std::vector<Segment> segments);
  static BarrierProfile sampled(std::vector<double> x, std::vector<double> U);

  double a() const { return a_; }
  double b() const { return b_; }

  /// Potential value at x (0 outside [a, b]; linear interpolation for
  /// sampled profiles).
  double value(double x) const;

  /// Interior points where U(x) is allowed to be discontinuous or
  /// non-smooth; used to split ODE integration ranges.
  std::vector<double> breakpoints() const;

  bool is_rectangular() const { return std::holds_alternative<Rectangular>(kind_); }
  bool is_piecewise() const { return std::holds_alternative<Piecewise>(kind_); }
  const Rectangular* as_rectangular() const { return std::get_if<Rectangular>(&kind_); }
  const Piecewise* as_piecewise() const { return std::get_if<Piecewise>(&kind_); }

  /// Exact segmentation for rectangular/piecewise kinds (no sampling error);
  /// falls back to midpoint discretization with n segments otherwise.
  PiecewiseBarrier exact_or_discretized(std::size_t n) const;

 private:
  BarrierProfile() = default;
  std::variant<Rectangular, Piecewise, Sampled> kind_;
  double a_ = 0.0;
  double b_ = 0.0;
};

/// Momentum and component ratio for one spin channel in one segment.
struct ChannelKinematics {
  double W;        ///< effective potential added to the mass term
  Complex p;       ///< longitudinal momentum, Im(p) >= 0; real or imaginary
  Complex f;       ///< component ratio p / (E + m + W)
  bool evanescent; ///< true iff p is imaginary

  double decay_rate() const { return p.imag(); }  // kappa for evanescent
};

/// Solves p^2 = E^2 - (m+W)^2 on the branch Im(p) >= 0 (Re(p) > 0 when
/// real). Throws ThresholdEnergy at the degenerate band edge and
/// SubRestEnergy when W = 0 and E <= m.
ChannelKinematics kinematics(double E, double m, double W);

/// Spin coherent incident spinor (u1, u2, f0 u2, f0 u1)/sqrt(1 + f0^2).
FourSpinor spin_coherent_spinor(const SpinOrientation& orientation, double f0);

/// Midpoint-sampled discretization into n equal-length segments.
/// Rectangular profiles are represented exactly for any n.
PiecewiseBarrier discretize(const BarrierProfile& profile, std::size_t n);

}  // namespace larmor

#endif
