#include "larmor/scattering.hpp"

#include <cmath>

namespace larmor {

TransferMatrix TransferMatrix::operator*(const TransferMatrix& rhs) const {
  TransferMatrix out;
  out.m00 = m00 * rhs.m00 + m01 * rhs.m10;
  out.m01 = m00 * rhs.m01 + m01 * rhs.m11;
  out.m10 = m10 * rhs.m00 + m11 * rhs.m10;
  out.m11 = m10 * rhs.m01 + m11 * rhs.m11;
  out.log_scale = log_scale + rhs.log_scale;
  return out;
}

TransferMatrix TransferMatrix::dense() const {
  if (std::abs(log_scale) > 700.0)
    throw Overflow("transfer-matrix scale exceeds double exponent range");
  const double s = std::exp(log_scale);
  return TransferMatrix{m00 * s, m01 * s, m10 * s, m11 * s, 0.0};
}

TransferMatrix segment_matrix(const ChannelKinematics& kin, double length) {
  if (!(length > 0.0)) throw MalformedProfile("segment length must be positive");
  const double kappa = kin.p.imag();  // 0 for propagating segments
  const Complex ip = Complex(0.0, 1.0) * kin.p;
  TransferMatrix t;
  t.m00 = std::exp(ip * length - kappa * length);
  t.m01 = Complex(0.0);
  t.m10 = Complex(0.0);
  t.m11 = std::exp(-ip * length - kappa * length);
  t.log_scale = kappa * length;
  return t;
}

TransferMatrix interface_matrix(Complex f_from, Complex f_to) {
  const Complex r = f_from / f_to;
  TransferMatrix t;
  t.m00 = 0.5 * (1.0 + r);
  t.m01 = 0.5 * (1.0 - r);
  t.m10 = 0.5 * (1.0 - r);
  t.m11 = 0.5 * (1.0 + r);
  return t;
}

double ScatteringResult::unitarity_residual() const {
  return std::abs((1.0 + f0 * f0) * (std::norm(T) + std::norm(R)) - 1.0);
}

namespace {

/// Total forward matrix across the barrier: maps local mode amplitudes at
/// x = a (exterior) to local mode amplitudes at x = b (exterior).
TransferMatrix total_matrix(const PiecewiseBarrier& barrier, double E,
                            double m, double shift, const ParticleState& ps) {
  const double E_int = E - shift;  // channel energy inside the field region
  TransferMatrix M = TransferMatrix::identity();
  Complex f_prev(ps.f0, 0.0);
  for (const Segment& seg : barrier.segments) {
    const ChannelKinematics kin = kinematics(E_int, m, seg.height);
    M = segment_matrix(kin, seg.length) * interface_matrix(f_prev, kin.f) * M;
    f_prev = kin.f;
  }
  M = interface_matrix(f_prev, Complex(ps.f0, 0.0)) * M;
  return M;
}

}  // namespace

ScatteringResult scatter_channel(const PiecewiseBarrier& barrier, double E,
                                 double m, double shift) {
  const ParticleState ps = ParticleState::make(E, m);
  const TransferMatrix M = total_matrix(barrier, E, m, shift, ps);

  const double L = barrier.total_length();
  const double norm = 1.0 / std::sqrt(1.0 + ps.f0 * ps.f0);
  // det(actual M) = 1: interface determinants f_prev/f_next telescope and
  // propagation blocks are unimodular, so T = e^{-ik0 L} / M11.
  const Complex T = std::polar(1.0, -ps.k0 * L) / M.m11 *
                    std::exp(-M.log_scale) * norm;
  const Complex R =
      -M.m10 / M.m11 * norm * std::polar(1.0, 2.0 * ps.k0 * barrier.a);

  ScatteringResult res;
  res.T = T;
  res.R = R;
  res.alpha = std::arg(T);
  res.beta = std::arg(R);
  res.f0 = ps.f0;
  res.shift = shift;
  return res;
}

ChannelPair scatter_spin(const PiecewiseBarrier& barrier, double E, double m,
                         double V) {
  ChannelPair pair;
  pair.minus = scatter_channel(barrier, E, m, -V);
  pair.plus = (V == 0.0) ? pair.minus : scatter_channel(barrier, E, m, +V);
  pair.V = V;
  return pair;
}

InteriorField interior_field(const PiecewiseBarrier& barrier, double E,
                             double m, double shift) {
  const ParticleState ps = ParticleState::make(E, m);
  const double E_int = E - shift;

  InteriorField field;
  field.a = barrier.a;
  field.b = barrier.b;
  field.amplitudes = scatter_channel(barrier, E, m, shift);

  // Back-substitute from the transmitted side; the backward-growing mode is
  // the physical one, so this direction is numerically stable.
  Complex alpha = field.amplitudes.T * std::polar(1.0, ps.k0 * barrier.b);
  Complex beta(0.0);
  Complex f_next(ps.f0, 0.0);

  field.waves.resize(barrier.segments.size());
  double x_right = barrier.b;
  for (std::size_t i = barrier.segments.size(); i-- > 0;) {
    const Segment& seg = barrier.segments[i];
    const ChannelKinematics kin = kinematics(E_int, m, seg.height);
    // Undo the interface at x_right (segment medium -> f_next).
    const TransferMatrix inv = interface_matrix(f_next, kin.f);
    const Complex ar = inv.m00 * alpha + inv.m01 * beta;
    const Complex br = inv.m10 * alpha + inv.m11 * beta;
    // Translate to the segment's left edge.
    const Complex ip = Complex(0.0, 1.0) * kin.p;
    const Complex A = ar * std::exp(-ip * seg.length);
    const Complex B = br * std::exp(ip * seg.length);
    if (!std::isfinite(A.real()) || !std::isfinite(B.real()))
      throw Overflow("interior amplitudes exceed double range");
    field.waves[i] =
        InteriorField::SegmentWave{x_right - seg.length, seg.length, A, B, kin};
    alpha = A;
    beta = B;
    f_next = kin.f;
    x_right -= seg.length;
  }
  return field;
}

double InteriorField::density(double x) const {
  for (const SegmentWave& w : waves) {
    if (x >= w.x_left && x <= w.x_left + w.length) {
      const double t = x - w.x_left;
      const Complex ip = Complex(0.0, 1.0) * w.kin.p;
      const Complex phi = w.A * std::exp(ip * t) + w.B * std::exp(-ip * t);
      const Complex chi = w.kin.f * (w.A * std::exp(ip * t) - w.B * std::exp(-ip * t));
      return std::norm(phi) + std::norm(chi);
    }
  }
  return 0.0;
}

namespace {

// int_0^L e^{qx} dx, with the q -> 0 limit handled exactly.
Complex exp_integral(Complex q, double L) {
  if (std::abs(q) * L < 1e-14) return Complex(L);
  return (std::exp(q * L) - 1.0) / q;
}

}  // namespace

double InteriorField::integrated_density() const {
  double total = 0.0;
  for (const SegmentWave& w : waves) {
    const double af2 = std::norm(w.kin.f);
    const double kappa = w.kin.p.imag();
    // rho(x) = (1+|f|^2)(|A|^2 e^{-2 kappa x} + |B|^2 e^{2 kappa x})
    //        + 2 (1-|f|^2) Re(A conj(B) e^{i(p + conj(p)) x})
    const double direct =
        (1.0 + af2) * (std::norm(w.A) * exp_integral(Complex(-2.0 * kappa), w.length).real() +
                       std::norm(w.B) * exp_integral(Complex(2.0 * kappa), w.length).real());
    const Complex q = Complex(0.0, 1.0) * (w.kin.p + std::conj(w.kin.p));
    const double cross =
        2.0 * (1.0 - af2) * (w.A * std::conj(w.B) * exp_integral(q, w.length)).real();
    total += direct + cross;
  }
  return total;
}

}  // namespace larmor
