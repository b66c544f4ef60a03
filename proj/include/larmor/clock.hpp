#ifndef LARMOR_CLOCK_HPP
#define LARMOR_CLOCK_HPP

// Tunneling-time quantities: channel times tau_T / tau_R from the
// sensitivity of the scattering phases to the spin-field coupling,
// the Larmor time as their channel-weighted combination, and the dwell
// time as the normalized density integral. Also the closed-form
// rectangular-barrier transmission time, its large-width saturation
// value, and a nonrelativistic reference solver.

#include <vector>

#include "larmor/scattering.hpp"

namespace larmor {

inline constexpr double kDefaultFdStep = 1e-6;
inline constexpr double kResonanceR2 = 1e-20;
inline constexpr double kStepHalvingTol = 1e-4;

struct PhaseTimes {
  double tau_T;
  double tau_R;
  double fd_step;   ///< step actually used (after halving)
  bool converged;   ///< step-halving agreed within kStepHalvingTol
};

/// Central differences of the transmission/reflection phases with respect
/// to the channel coupling, evaluated as arg(T(+h) conj(T(-h))) / (2h) so
/// phase unwrapping is implicit. Throws ReflectionVanishes at a
/// transmission resonance and StepTooLarge when halving the step moves the
/// result by more than kStepHalvingTol relative.
PhaseTimes phase_times(const PiecewiseBarrier& barrier, double E, double m,
                       double h = kDefaultFdStep);

struct LarmorTime {
  double tau_L;
  bool at_resonance;  ///< |R|^2 < kResonanceR2: reflection weight taken as 0
  double fd_step;
  bool converged;
};

/// Channel-weighted precession time
///   tau_L = (1+f0^2)|T|^2 tau_T + (1+f0^2)|R|^2 tau_R.
LarmorTime larmor_time(const PiecewiseBarrier& barrier, double E, double m,
                       double h = kDefaultFdStep);

/// Dwell time: integral of the stationary density over the barrier region
/// divided by the incident flux 2 f0 / (1 + f0^2). Field-independent.
double dwell_time(const PiecewiseBarrier& barrier, double E, double m);

/// All four times plus diagnostics; resonance rows carry tau_R = NaN.
struct ClockTimes {
  double tau_T;
  double tau_R;  ///< NaN at a transmission resonance
  double tau_L;
  double tau_D;
  double fd_step;
  bool converged;
  bool at_resonance;
};

ClockTimes clock_times(const PiecewiseBarrier& barrier, double E, double m,
                       double h = kDefaultFdStep);

/// Exact transmission time for a rectangular barrier of half width d and
/// height U0 in the evanescent regime m < E < m + U0, with the sinh
/// factors evaluated on a log scale for very opaque barriers.
double analytic_rect_tau_T(double E, double U0, double d, double m = 1.0);

/// Large-width limit of analytic_rect_tau_T (width saturation value).
double rect_tau_T_saturation(double E, double U0, double m = 1.0);

/// Traversal time of a free particle over length L at group velocity k0/E.
double free_traversal_time(double E, double L, double m = 1.0);

struct HartmanPoint {
  double d;
  double tau_T;
  double tau_free;  ///< free traversal of the same width 2d
  double ratio;     ///< tau_T / tau_free
};

/// Width sweep at fixed (E, U0): tau_T saturates while tau_free grows.
std::vector<HartmanPoint> hartman_sweep(double E, double U0, double m,
                                        const std::vector<double>& d_list);

/// Nonrelativistic reference (standard Schroedinger transfer matrix with
/// derivative matching; the probe coupling adds to the potential). Energies
/// are kinetic. Used for the low-energy limit cross-check.
struct SchrodingerTimes {
  double tau_T;
  double tau_R;
  double tau_D;
  double T2;  ///< |T|^2 at zero coupling
  double R2;  ///< |R|^2 at zero coupling
};

SchrodingerTimes schrodinger_reference(const PiecewiseBarrier& barrier,
                                       double kinetic_energy, double m,
                                       double h = 1e-9);

}  // namespace larmor

#endif
