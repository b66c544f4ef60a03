#include "larmor/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace larmor {

ParticleState ParticleState::make(double E, double m) {
  if (!(m > 0.0)) throw MalformedProfile("rest mass must be positive");
  if (E <= m) throw SubRestEnergy("total energy must exceed rest energy");
  const double k0 = std::sqrt(E * E - m * m);
  return ParticleState{E, m, k0, k0 / (m + E)};
}

Complex SpinOrientation::u1() const {
  return std::polar(std::cos(theta / 2.0), -phi / 2.0);
}

Complex SpinOrientation::u2() const {
  return std::polar(std::sin(theta / 2.0), phi / 2.0);
}

ChannelKinematics kinematics(double E, double m, double W) {
  if (!std::isfinite(W)) throw MalformedProfile("segment potential must be finite");
  const double M = m + W;
  const double p2 = E * E - M * M;
  if (std::abs(p2) < 1e-14)
    throw ThresholdEnergy("E at band edge of segment (degenerate momentum)");
  if (W == 0.0 && E <= m) throw SubRestEnergy("E <= m in the free region");
  ChannelKinematics kin;
  kin.W = W;
  if (p2 > 0.0) {
    kin.p = Complex(std::sqrt(p2), 0.0);
    kin.evanescent = false;
  } else {
    kin.p = Complex(0.0, std::sqrt(-p2));
    kin.evanescent = true;
  }
  kin.f = kin.p / (E + M);
  return kin;
}

FourSpinor spin_coherent_spinor(const SpinOrientation& orientation, double f0) {
  const double norm = 1.0 / std::sqrt(1.0 + f0 * f0);
  const Complex u1 = orientation.u1();
  const Complex u2 = orientation.u2();
  return {norm * u1, norm * u2, norm * f0 * u2, norm * f0 * u1};
}

namespace {

void check_segments(const std::vector<Segment>& segments) {
  if (segments.empty()) throw MalformedProfile("barrier needs at least one segment");
  for (const Segment& s : segments) {
    if (!(s.length > 0.0)) throw MalformedProfile("segment length must be positive");
    if (!std::isfinite(s.height)) throw MalformedProfile("segment height must be finite");
  }
}

}  // namespace

BarrierProfile BarrierProfile::rectangular(double U0, double d) {
  if (!(U0 > 0.0)) throw MalformedProfile("rectangular height U0 must be positive");
  if (!(d > 0.0)) throw MalformedProfile("rectangular half width d must be positive");
  BarrierProfile p;
  p.kind_ = Rectangular{U0, d};
  p.a_ = -d;
  p.b_ = d;
  return p;
}

BarrierProfile BarrierProfile::piecewise(std::vector<Segment> segments) {
  check_segments(segments);
  double total = 0.0;
  for (const Segment& s : segments) total += s.length;
  BarrierProfile p;
  p.kind_ = Piecewise{std::move(segments)};
  p.a_ = -total / 2.0;  // centered support; see symmetric-barrier phase relation
  p.b_ = total / 2.0;
  return p;
}

BarrierProfile BarrierProfile::sampled(std::vector<double> x, std::vector<double> U) {
  if (x.size() != U.size() || x.size() < 2)
    throw MalformedProfile("sampled profile needs >= 2 (x, U) pairs");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw MalformedProfile("sample positions must increase");
  for (double u : U)
    if (!std::isfinite(u)) throw MalformedProfile("sampled height must be finite");
  BarrierProfile p;
  p.a_ = x.front();
  p.b_ = x.back();
  p.kind_ = Sampled{std::move(x), std::move(U)};
  return p;
}

double BarrierProfile::value(double x) const {
  if (x < a_ || x > b_) return 0.0;
  if (const auto* r = std::get_if<Rectangular>(&kind_)) return r->U0;
  if (const auto* pw = std::get_if<Piecewise>(&kind_)) {
    double left = a_;
    for (const Segment& s : pw->segments) {
      if (x <= left + s.length) return s.height;
      left += s.length;
    }
    return pw->segments.back().height;
  }
  const auto& s = std::get<Sampled>(kind_);
  const auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
  if (it == s.x.begin()) return s.U.front();
  if (it == s.x.end()) return s.U.back();
  const std::size_t i = static_cast<std::size_t>(it - s.x.begin());
  const double t = (x - s.x[i - 1]) / (s.x[i] - s.x[i - 1]);
  return (1.0 - t) * s.U[i - 1] + t * s.U[i];
}

std::vector<double> BarrierProfile::breakpoints() const {
  std::vector<double> pts;
  if (const auto* pw = std::get_if<Piecewise>(&kind_)) {
    double left = a_;
    for (std::size_t i = 0; i + 1 < pw->segments.size(); ++i) {
      left += pw->segments[i].length;
      pts.push_back(left);
    }
  } else if (const auto* s = std::get_if<Sampled>(&kind_)) {
    pts.assign(s->x.begin() + 1, s->x.end() - 1);
  }
  return pts;
}

PiecewiseBarrier BarrierProfile::exact_or_discretized(std::size_t n) const {
  if (const auto* r = std::get_if<Rectangular>(&kind_)) {
    return PiecewiseBarrier{a_, b_, {Segment{2.0 * r->d, r->U0}}};
  }
  if (const auto* pw = std::get_if<Piecewise>(&kind_)) {
    return PiecewiseBarrier{a_, b_, pw->segments};
  }
  return discretize(*this, n);
}

PiecewiseBarrier discretize(const BarrierProfile& profile, std::size_t n) {
  if (n < 1) throw MalformedProfile("segment count must be >= 1");
  PiecewiseBarrier pb;
  pb.a = profile.a();
  pb.b = profile.b();
  const double h = (pb.b - pb.a) / static_cast<double>(n);
  pb.segments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = pb.a + (static_cast<double>(i) + 0.5) * h;
    pb.segments.push_back(Segment{h, profile.value(mid)});
  }
  return pb;
}

}  // namespace larmor
