#include "larmor/clock.hpp"

#include <cmath>
#include <limits>

namespace larmor {

namespace {

struct RawTimes {
  double tau_T;
  double tau_R;
};

// Phase difference arg(a) - arg(b) wrapped to (-pi, pi]. Equivalent to
// arg(a conj(b)) but immune to underflow when both amplitudes are tiny.
double phase_diff(Complex a, Complex b) {
  double d = std::arg(a) - std::arg(b);
  if (d > M_PI) d -= 2.0 * M_PI;
  if (d <= -M_PI) d += 2.0 * M_PI;
  return d;
}

// Central difference of both phases at +-h.
RawTimes raw_phase_times(const PiecewiseBarrier& barrier, double E, double m,
                         double h) {
  const ScatteringResult plus = scatter_channel(barrier, E, m, +h);
  const ScatteringResult minus = scatter_channel(barrier, E, m, -h);
  RawTimes t;
  t.tau_T = -phase_diff(plus.T, minus.T) / (2.0 * h);
  t.tau_R = -phase_diff(plus.R, minus.R) / (2.0 * h);
  return t;
}

bool halving_agrees(double coarse, double fine) {
  const double scale = std::max(std::abs(fine), 1e-30);
  return std::abs(coarse - fine) <= kStepHalvingTol * scale;
}

struct FullTimes {
  PhaseTimes phase;
  double wT, wR;  ///< channel weights (1+f0^2)|T|^2, (1+f0^2)|R|^2
  bool at_resonance;
};

FullTimes full_times(const PiecewiseBarrier& barrier, double E, double m,
                     double h) {
  const ScatteringResult zero = scatter_channel(barrier, E, m, 0.0);
  const double w = 1.0 + zero.f0 * zero.f0;

  FullTimes out;
  out.wT = w * std::norm(zero.T);
  out.wR = w * std::norm(zero.R);
  out.at_resonance = std::norm(zero.R) < kResonanceR2;

  const RawTimes coarse = raw_phase_times(barrier, E, m, h);
  const RawTimes fine = raw_phase_times(barrier, E, m, h / 2.0);
  bool ok = halving_agrees(coarse.tau_T, fine.tau_T);
  if (!out.at_resonance) ok = ok && halving_agrees(coarse.tau_R, fine.tau_R);

  out.phase.tau_T = fine.tau_T;
  out.phase.tau_R = fine.tau_R;
  out.phase.fd_step = h / 2.0;
  out.phase.converged = ok;
  return out;
}

}  // namespace

PhaseTimes phase_times(const PiecewiseBarrier& barrier, double E, double m,
                       double h) {
  if (!(h > 0.0)) throw StepTooLarge("finite-difference step must be positive");
  const FullTimes full = full_times(barrier, E, m, h);
  if (full.at_resonance)
    throw ReflectionVanishes("transmission resonance: reflection phase undefined");
  if (!full.phase.converged)
    throw StepTooLarge("step halving moved the phase derivative by > 1e-4 relative");
  return full.phase;
}

LarmorTime larmor_time(const PiecewiseBarrier& barrier, double E, double m,
                       double h) {
  const FullTimes full = full_times(barrier, E, m, h);
  LarmorTime out;
  out.at_resonance = full.at_resonance;
  out.fd_step = full.phase.fd_step;
  out.converged = full.phase.converged;
  out.tau_L = full.wT * full.phase.tau_T +
              (full.at_resonance ? 0.0 : full.wR * full.phase.tau_R);
  return out;
}

double dwell_time(const PiecewiseBarrier& barrier, double E, double m) {
  const InteriorField field = interior_field(barrier, E, m, 0.0);
  const double f0 = field.amplitudes.f0;
  const double j_in = 2.0 * f0 / (1.0 + f0 * f0);
  return field.integrated_density() / j_in;
}

ClockTimes clock_times(const PiecewiseBarrier& barrier, double E, double m,
                       double h) {
  const FullTimes full = full_times(barrier, E, m, h);
  ClockTimes out;
  out.tau_T = full.phase.tau_T;
  out.tau_R = full.at_resonance ? std::numeric_limits<double>::quiet_NaN()
                                : full.phase.tau_R;
  out.tau_L = full.wT * full.phase.tau_T +
              (full.at_resonance ? 0.0 : full.wR * full.phase.tau_R);
  out.tau_D = dwell_time(barrier, E, m);
  out.fd_step = full.phase.fd_step;
  out.converged = full.phase.converged;
  out.at_resonance = full.at_resonance;
  return out;
}

double analytic_rect_tau_T(double E, double U0, double d, double m) {
  if (!(E > m)) throw SubRestEnergy("E must exceed m");
  if (!(d >= 0.0)) throw MalformedProfile("half width must be non-negative");
  if (E > m + U0 - 1e-6)
    throw NotEvanescent("closed form valid only for E < m + U0 (with guard band)");
  const double k0 = std::sqrt(E * E - m * m);
  const double f0 = k0 / (m + E);
  const double xi = m + U0 + E;
  const double k = std::sqrt((m + U0) * (m + U0) - E * E);
  const double A = k * k - f0 * f0 * xi * xi;
  const double B = (k * k + E * xi) * (k * k + f0 * f0 * xi * xi);
  const double D1 = 4.0 * f0 * f0 * xi * xi * k * k;
  const double D2 = (k * k + f0 * f0 * xi * xi) * (k * k + f0 * f0 * xi * xi);
  const double x = 2.0 * d * k;
  if (2.0 * x <= 700.0) {
    const double sh = std::sinh(2.0 * x);
    const double sh2 = std::sinh(x);
    return f0 / k * (2.0 * x * xi * E * A + B * sh) / (D1 + D2 * sh2 * sh2);
  }
  // Opaque regime: divide through by e^{2x} to keep everything finite.
  const double e2 = std::exp(-2.0 * x);
  const double e4 = e2 * e2;
  const double num = 2.0 * x * xi * E * A * e2 + B * 0.5 * (1.0 - e4);
  const double den = D1 * e2 + D2 * 0.25 * (1.0 - e2) * (1.0 - e2);
  return f0 / k * num / den;
}

double rect_tau_T_saturation(double E, double U0, double m) {
  if (!(E > m)) throw SubRestEnergy("E must exceed m");
  if (E > m + U0 - 1e-6)
    throw NotEvanescent("saturation value defined in the evanescent regime");
  const double k0 = std::sqrt(E * E - m * m);
  const double f0 = k0 / (m + E);
  const double xi = m + U0 + E;
  const double k = std::sqrt((m + U0) * (m + U0) - E * E);
  return 2.0 * f0 * (k * k + E * xi) / (k * (k * k + f0 * f0 * xi * xi));
}

double free_traversal_time(double E, double L, double m) {
  if (!(E > m)) throw SubRestEnergy("E must exceed m");
  if (!(L > 0.0)) throw MalformedProfile("length must be positive");
  return L * E / std::sqrt(E * E - m * m);
}

std::vector<HartmanPoint> hartman_sweep(double E, double U0, double m,
                                        const std::vector<double>& d_list) {
  std::vector<HartmanPoint> out;
  out.reserve(d_list.size());
  for (double d : d_list) {
    const PiecewiseBarrier barrier =
        BarrierProfile::rectangular(U0, d).exact_or_discretized(1);
    const PhaseTimes pt = phase_times(barrier, E, m);
    const double tf = free_traversal_time(E, 2.0 * d, m);
    out.push_back(HartmanPoint{d, pt.tau_T, tf, pt.tau_T / tf});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nonrelativistic reference solver (second-order equation: derivative
// matching at interfaces, probe coupling added to the potential).
// ---------------------------------------------------------------------------

namespace {

Complex nr_momentum(double Ek, double m, double U) {
  const double q2 = 2.0 * m * (Ek - U);
  if (std::abs(q2) < 1e-16)
    throw ThresholdEnergy("NR energy at band edge of segment");
  return q2 > 0.0 ? Complex(std::sqrt(q2), 0.0) : Complex(0.0, std::sqrt(-q2));
}

struct NrSolution {
  Complex T, R;
  double tau_D;
};

NrSolution nr_scatter(const PiecewiseBarrier& barrier, double Ek, double m,
                      double s) {
  if (!(Ek > 0.0)) throw SubRestEnergy("NR kinetic energy must be positive");
  const double k0 = std::sqrt(2.0 * m * Ek);
  TransferMatrix M = TransferMatrix::identity();
  Complex q_prev(k0, 0.0);
  std::vector<ChannelKinematics> kins;
  kins.reserve(barrier.segments.size());
  for (const Segment& seg : barrier.segments) {
    const Complex q = nr_momentum(Ek, m, seg.height + s);
    ChannelKinematics kin;
    kin.W = seg.height + s;
    kin.p = q;
    kin.f = q;  // interface mixing ratio: momentum itself (derivative matching)
    kin.evanescent = q.imag() > 0.0;
    kins.push_back(kin);
    M = segment_matrix(kin, seg.length) * interface_matrix(q_prev, q) * M;
    q_prev = q;
  }
  M = interface_matrix(q_prev, Complex(k0, 0.0)) * M;

  NrSolution sol;
  sol.T = std::polar(1.0, -k0 * barrier.total_length()) / M.m11 *
          std::exp(-M.log_scale);
  sol.R = -M.m10 / M.m11 * std::polar(1.0, 2.0 * k0 * barrier.a);

  // Dwell integral of |phi|^2, back-substituted from the transmitted side.
  Complex alpha = sol.T * std::polar(1.0, k0 * barrier.b);
  Complex beta(0.0);
  Complex q_next(k0, 0.0);
  double integral = 0.0;
  for (std::size_t i = barrier.segments.size(); i-- > 0;) {
    const Segment& seg = barrier.segments[i];
    const Complex q = kins[i].p;
    const TransferMatrix inv = interface_matrix(q_next, q);
    const Complex ar = inv.m00 * alpha + inv.m01 * beta;
    const Complex br = inv.m10 * alpha + inv.m11 * beta;
    const Complex ip = Complex(0.0, 1.0) * q;
    const Complex A = ar * std::exp(-ip * seg.length);
    const Complex B = br * std::exp(ip * seg.length);
    const double kappa = q.imag();
    const auto expint = [&](Complex w) {
      if (std::abs(w) * seg.length < 1e-14) return Complex(seg.length);
      return (std::exp(w * seg.length) - 1.0) / w;
    };
    integral += std::norm(A) * expint(Complex(-2.0 * kappa)).real() +
                std::norm(B) * expint(Complex(2.0 * kappa)).real() +
                2.0 * (A * std::conj(B) * expint(Complex(0.0, 1.0) * (q + std::conj(q)))).real();
    alpha = A;
    beta = B;
    q_next = q;
  }
  sol.tau_D = integral * m / k0;
  return sol;
}

}  // namespace

SchrodingerTimes schrodinger_reference(const PiecewiseBarrier& barrier,
                                       double kinetic_energy, double m,
                                       double h) {
  const NrSolution plus = nr_scatter(barrier, kinetic_energy, m, +h);
  const NrSolution minus = nr_scatter(barrier, kinetic_energy, m, -h);
  SchrodingerTimes t;
  t.tau_T = -std::arg(plus.T * std::conj(minus.T)) / (2.0 * h);
  t.tau_R = -std::arg(plus.R * std::conj(minus.R)) / (2.0 * h);
  const NrSolution zero = nr_scatter(barrier, kinetic_energy, m, 0.0);
  t.tau_D = zero.tau_D;
  t.T2 = std::norm(zero.T);
  t.R2 = std::norm(zero.R);
  return t;
}

}  // namespace larmor
