#ifndef LARMOR_VALIDATION_HPP
#define LARMOR_VALIDATION_HPP

// Invariant suites behind `larmor validate` and the acceptance runner.
// Each suite pins its tolerance from the physics contract; overrides exist
// for negative-control testing only.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "larmor/clock.hpp"
#include "larmor/spin_observables.hpp"

namespace larmor::validation {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

inline constexpr std::uint64_t kDefaultSeed = 0x1a2b3c4d5e6f7ULL;

/// Random asymmetric piecewise barrier: up to max_segments segments,
/// heights in [0, 2m], lengths in [0.1, 1].
PiecewiseBarrier random_barrier(std::mt19937_64& rng, double m,
                                std::size_t max_segments = 10);

/// Energy draw in (1.05 m, 3 m) avoiding segment band edges of `barrier`.
double random_energy(std::mt19937_64& rng, double m,
                     const PiecewiseBarrier& barrier);

// Probability conservation: residual < tol_exact for piecewise barriers,
// < tol_smooth for a Gaussian discretized at n = 4096.
SuiteResult unitarity_suite(double tol_exact = 1e-12, double tol_smooth = 1e-8,
                            std::size_t n_cases = 50,
                            std::uint64_t seed = kDefaultSeed);

// Precession time equals dwell time on randomized asymmetric barriers,
// with step-halving convergence required.
SuiteResult central_identity_suite(double rel_tol = 1e-6,
                                   std::size_t n_cases = 50,
                                   std::uint64_t seed = kDefaultSeed);

// Symmetric barriers: alpha - beta = pi/2 and all four times agree.
SuiteResult symmetric_suite(double phase_tol = 1e-8, double time_tol = 1e-6);

// Rectangular barrier: numeric phase times match the closed form on a
// 20 x 10 grid in (E, d), plus the spot value at (1.2, 1, 1, 1).
SuiteResult closed_form_suite(double tol = 1e-8);

// Width saturation: tau_T bounded by its limit, tau_T < tau_free past
// unit width, |tau_T(d=5) - tau_inf| < tol.
SuiteResult hartman_suite(double tol = 1e-8);

// Exact bilinears vs small-field closed forms: fitted order 2.0 +- 0.1,
// s3 of the summed wave V-independent to O(V^2).
SuiteResult spin_first_order_suite(double order_tol = 0.1);

// Spin read-out equals the channel-weighted precession time at V = 1e-6.
SuiteResult clock_readout_suite(double rel_tol = 1e-5, std::size_t n_cases = 10,
                                std::uint64_t seed = kDefaultSeed);

// Transfer matrix vs adaptive integration, modulus and phase (mod 2pi);
// low-energy agreement with the nonrelativistic solver and relativistic
// disagreement as a negative control.
SuiteResult oracle_suite(double tol = 1e-6, std::size_t n_cases = 10,
                         std::uint64_t seed = kDefaultSeed);

std::vector<SuiteResult> run_all(std::uint64_t seed = kDefaultSeed);

}  // namespace larmor::validation

#endif
