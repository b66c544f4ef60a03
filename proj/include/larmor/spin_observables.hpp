#ifndef LARMOR_SPIN_OBSERVABLES_HPP
#define LARMOR_SPIN_OBSERVABLES_HPP

// Spin expectation values of the transmitted, reflected and summed outgoing
// waves, the free-precession reference, and the read-out that turns the
// precessed spin back into a time. Exact spinor bilinears are the primary
// path; the small-field closed forms live alongside for cross-checks.

#include <array>

#include "larmor/scattering.hpp"

namespace larmor {

/// Expectation values of S_1, S_2, S_3 in units of hbar (a fully polarized
/// unit-norm state has |s| = 1/2).
struct SpinVector {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;

  SpinVector operator+(const SpinVector& o) const {
    return {s1 + o.s1, s2 + o.s2, s3 + o.s3};
  }
  double magnitude() const;
};

/// 4x4 spin matrices Sigma_i = diag(sigma_i, sigma_i), row-major.
using Mat4 = std::array<std::array<Complex, 4>, 4>;
Mat4 sigma4(int i);  ///< i in {1, 2, 3}

/// s_i = (1/2) psi^dagger Sigma_i psi, no small-field approximation.
SpinVector spin_expect_exact(const FourSpinor& psi);

/// psi_t built from the channel amplitude pair: (T- u1, T+ u2, f0 T+ u2, f0 T- u1).
FourSpinor transmitted_spinor(const ChannelPair& pair,
                              const SpinOrientation& orientation, double f0);

/// psi_r mirrors psi_t with the lower-component signs flipped.
FourSpinor reflected_spinor(const ChannelPair& pair,
                            const SpinOrientation& orientation, double f0);

SpinVector transmitted_spin(const ChannelPair& pair,
                            const SpinOrientation& orientation, double f0);
SpinVector reflected_spin(const ChannelPair& pair,
                          const SpinOrientation& orientation, double f0);

/// Sum of transmitted and reflected expectation values.
SpinVector summed_spin(const ChannelPair& pair,
                       const SpinOrientation& orientation, double f0);

/// Free Larmor precession of the incident coherent state for time t:
///   s1 = (1/2) sin(theta) cos(-omega_L t + phi)
///   s2 = (1/2) ((1-f0^2)/(1+f0^2)) sin(theta) sin(-omega_L t + phi)
///   s3 = (1/2) ((1-f0^2)/(1+f0^2)) cos(theta)
SpinVector free_precession(const SpinOrientation& orientation, double f0,
                           double omega_L, double t);

struct PrecessionReading {
  double angle;         ///< elapsed azimuthal angle, wrapped to (-pi, pi]
  double time;          ///< angle / omega_L
  double conditioning;  ///< (1 - f0^2) scale undone on s2
};

/// Inverts the precession: rescales s2 by (1+f0^2)/(1-f0^2) to undo the
/// relativistic ellipse, then reads the azimuth against the incident phi.
/// Throws PoleOrientation when sin(theta) is degenerate and
/// UltraRelativisticDegeneracy when f0 -> 1.
PrecessionReading extract_precession_time(const SpinVector& sv,
                                          const SpinOrientation& orientation,
                                          double f0, double omega_L);

// ---------------------------------------------------------------------------
// Small-field closed forms (first order in the coupling). Primarily for
// verification against the exact bilinears above.
// ---------------------------------------------------------------------------

/// Zero-field amplitudes and their first V-derivatives, from central
/// differences at step h.
struct SmallFieldInputs {
  double T2;        ///< |T_U|^2
  double R2;        ///< |R_U|^2
  double dalpha;    ///< d arg(T)/dV of the "U+V" channel at V = 0 (= -tau_T)
  double dbeta;     ///< d arg(R)/dV at V = 0 (= -tau_R)
  double dT2;       ///< d|T|^2/dV at V = 0
  double dR2;       ///< d|R|^2/dV at V = 0
  double f0;
};

SmallFieldInputs small_field_inputs(const PiecewiseBarrier& barrier, double E,
                                    double m, double h = 1e-6);

SpinVector transmitted_spin_first_order(const SmallFieldInputs& in,
                                        const SpinOrientation& orientation,
                                        double V);
SpinVector reflected_spin_first_order(const SmallFieldInputs& in,
                                      const SpinOrientation& orientation,
                                      double V);

/// Resummed single-cosine form of the summed transverse components.
SpinVector summed_spin_first_order(const SmallFieldInputs& in,
                                   const SpinOrientation& orientation,
                                   double V);

}  // namespace larmor

#endif
