#include "larmor/spin_observables.hpp"

#include <cmath>

namespace larmor {

double SpinVector::magnitude() const {
  return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
}

Mat4 sigma4(int i) {
  const Complex o(0.0), one(1.0), im(0.0, 1.0);
  Mat4 m{};
  switch (i) {
    case 1:
      m = {{{o, one, o, o}, {one, o, o, o}, {o, o, o, one}, {o, o, one, o}}};
      break;
    case 2:
      m = {{{o, -im, o, o}, {im, o, o, o}, {o, o, o, -im}, {o, o, im, o}}};
      break;
    case 3:
      m = {{{one, o, o, o}, {o, -one, o, o}, {o, o, one, o}, {o, o, o, -one}}};
      break;
    default:
      throw Error("sigma4 index must be 1, 2 or 3");
  }
  return m;
}

SpinVector spin_expect_exact(const FourSpinor& psi) {
  SpinVector sv;
  double* out[3] = {&sv.s1, &sv.s2, &sv.s3};
  for (int i = 1; i <= 3; ++i) {
    const Mat4 S = sigma4(i);
    Complex acc(0.0);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) acc += std::conj(psi[r]) * S[r][c] * psi[c];
    *out[i - 1] = 0.5 * acc.real();
  }
  return sv;
}

FourSpinor transmitted_spinor(const ChannelPair& pair,
                              const SpinOrientation& orientation, double f0) {
  const Complex u1 = orientation.u1();
  const Complex u2 = orientation.u2();
  const Complex Tm = pair.minus.T;
  const Complex Tp = pair.plus.T;
  return {Tm * u1, Tp * u2, f0 * Tp * u2, f0 * Tm * u1};
}

FourSpinor reflected_spinor(const ChannelPair& pair,
                            const SpinOrientation& orientation, double f0) {
  const Complex u1 = orientation.u1();
  const Complex u2 = orientation.u2();
  const Complex Rm = pair.minus.R;
  const Complex Rp = pair.plus.R;
  return {Rm * u1, Rp * u2, -f0 * Rp * u2, -f0 * Rm * u1};
}

SpinVector transmitted_spin(const ChannelPair& pair,
                            const SpinOrientation& orientation, double f0) {
  return spin_expect_exact(transmitted_spinor(pair, orientation, f0));
}

SpinVector reflected_spin(const ChannelPair& pair,
                          const SpinOrientation& orientation, double f0) {
  return spin_expect_exact(reflected_spinor(pair, orientation, f0));
}

SpinVector summed_spin(const ChannelPair& pair,
                       const SpinOrientation& orientation, double f0) {
  return transmitted_spin(pair, orientation, f0) +
         reflected_spin(pair, orientation, f0);
}

SpinVector free_precession(const SpinOrientation& orientation, double f0,
                           double omega_L, double t) {
  const double ratio = (1.0 - f0 * f0) / (1.0 + f0 * f0);
  const double arg = -omega_L * t + orientation.phi;
  SpinVector sv;
  sv.s1 = 0.5 * std::sin(orientation.theta) * std::cos(arg);
  sv.s2 = 0.5 * ratio * std::sin(orientation.theta) * std::sin(arg);
  sv.s3 = 0.5 * ratio * std::cos(orientation.theta);
  return sv;
}

namespace {

double wrap_angle(double x) {
  x = std::fmod(x, 2.0 * M_PI);
  if (x <= -M_PI) x += 2.0 * M_PI;
  if (x > M_PI) x -= 2.0 * M_PI;
  return x;
}

}  // namespace

PrecessionReading extract_precession_time(const SpinVector& sv,
                                          const SpinOrientation& orientation,
                                          double f0, double omega_L) {
  if (std::sin(orientation.theta) <= 1e-6)
    throw PoleOrientation("spin along z: no transverse component to read");
  const double conditioning = 1.0 - f0 * f0;
  if (conditioning <= 1e-6)
    throw UltraRelativisticDegeneracy("f0 -> 1: precession ellipse degenerate");
  const double s2_rescaled = sv.s2 * (1.0 + f0 * f0) / conditioning;
  PrecessionReading reading;
  reading.angle = wrap_angle(orientation.phi - std::atan2(s2_rescaled, sv.s1));
  reading.time = reading.angle / omega_L;
  reading.conditioning = conditioning;
  return reading;
}

SmallFieldInputs small_field_inputs(const PiecewiseBarrier& barrier, double E,
                                    double m, double h) {
  const ScatteringResult zero = scatter_channel(barrier, E, m, 0.0);
  const ScatteringResult plus = scatter_channel(barrier, E, m, +h);
  const ScatteringResult minus = scatter_channel(barrier, E, m, -h);
  SmallFieldInputs in;
  in.T2 = std::norm(zero.T);
  in.R2 = std::norm(zero.R);
  in.dalpha = std::arg(plus.T * std::conj(minus.T)) / (2.0 * h);
  in.dbeta = std::arg(plus.R * std::conj(minus.R)) / (2.0 * h);
  in.dT2 = (std::norm(plus.T) - std::norm(minus.T)) / (2.0 * h);
  in.dR2 = (std::norm(plus.R) - std::norm(minus.R)) / (2.0 * h);
  in.f0 = zero.f0;
  return in;
}

SpinVector transmitted_spin_first_order(const SmallFieldInputs& in,
                                        const SpinOrientation& o, double V) {
  const double f02 = in.f0 * in.f0;
  const double arg = 2.0 * V * in.dalpha + o.phi;
  SpinVector sv;
  sv.s1 = 0.5 * (1.0 + f02) * in.T2 * std::sin(o.theta) * std::cos(arg);
  sv.s2 = 0.5 * (1.0 - f02) * in.T2 * std::sin(o.theta) * std::sin(arg);
  sv.s3 = 0.5 * (1.0 - f02) * (in.T2 * std::cos(o.theta) - V * in.dT2);
  return sv;
}

SpinVector reflected_spin_first_order(const SmallFieldInputs& in,
                                      const SpinOrientation& o, double V) {
  const double f02 = in.f0 * in.f0;
  const double arg = 2.0 * V * in.dbeta + o.phi;
  SpinVector sv;
  sv.s1 = 0.5 * (1.0 + f02) * in.R2 * std::sin(o.theta) * std::cos(arg);
  sv.s2 = 0.5 * (1.0 - f02) * in.R2 * std::sin(o.theta) * std::sin(arg);
  sv.s3 = 0.5 * (1.0 - f02) * (in.R2 * std::cos(o.theta) - V * in.dR2);
  return sv;
}

SpinVector summed_spin_first_order(const SmallFieldInputs& in,
                                   const SpinOrientation& o, double V) {
  const double f02 = in.f0 * in.f0;
  const double w = 1.0 + f02;
  const double arg =
      w * in.T2 * 2.0 * V * in.dalpha + w * in.R2 * 2.0 * V * in.dbeta + o.phi;
  SpinVector sv;
  sv.s1 = 0.5 * std::sin(o.theta) * std::cos(arg);
  sv.s2 = 0.5 * (1.0 - f02) / w * std::sin(o.theta) * std::sin(arg);
  sv.s3 = 0.5 * (1.0 - f02) / w * std::cos(o.theta);
  return sv;
}

}  // namespace larmor
