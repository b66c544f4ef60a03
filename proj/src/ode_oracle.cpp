#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <vector>

#include "larmor/scattering.hpp"

namespace larmor {

namespace {

namespace odeint = boost::numeric::odeint;

using State = std::vector<Complex>;  // (phi, chi)

constexpr double kAbsTol = 1e-12;
constexpr double kRelTol = 1e-10;

struct Rhs {
  const std::function<double(double)>* potential;
  double E_ch;
  double m;

  void operator()(const State& y, State& dydx, double x) const {
    const double M = m + (*potential)(x);
    dydx[0] = Complex(0.0, 1.0) * (E_ch + M) * y[1];
    dydx[1] = Complex(0.0, 1.0) * (E_ch - M) * y[0];
  }
};

ScatteringResult integrate_profile(const std::function<double(double)>& U,
                                   double a, double b,
                                   const std::vector<double>& breaks, double E,
                                   double m, double shift) {
  const ParticleState ps = ParticleState::make(E, m);
  const Rhs rhs{&U, E - shift, m};

  // Start from a pure transmitted wave at b and shoot right-to-left; the
  // backward-growing mode is the physical one, so no boundary-value solve
  // is needed.
  State y = {std::polar(1.0, ps.k0 * b),
             ps.f0 * std::polar(1.0, ps.k0 * b)};

  std::vector<double> stops;
  stops.push_back(b);
  for (auto it = breaks.rbegin(); it != breaks.rend(); ++it) stops.push_back(*it);
  stops.push_back(a);

  auto stepper = odeint::make_controlled(
      kAbsTol, kRelTol,
      odeint::runge_kutta_dopri5<State, double, State, double,
                                 odeint::range_algebra>());
  try {
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
      const double x0 = stops[i];
      const double x1 = stops[i + 1];
      if (x1 >= x0) continue;
      odeint::integrate_adaptive(stepper, rhs, y, x0, x1, (x1 - x0) / 64.0);
    }
  } catch (const std::exception& e) {
    throw IntegratorFailure(std::string("adaptive step control failed: ") + e.what());
  }

  // Decompose the state at a into incident/reflected plane waves.
  const Complex phase_a = std::polar(1.0, ps.k0 * a);
  const Complex A = 0.5 * (y[0] + y[1] / ps.f0) / phase_a;
  const Complex B = 0.5 * (y[0] - y[1] / ps.f0) * phase_a;
  const double norm = 1.0 / std::sqrt(1.0 + ps.f0 * ps.f0);

  ScatteringResult res;
  res.T = norm / A;
  res.R = norm * B / A;
  res.alpha = std::arg(res.T);
  res.beta = std::arg(res.R);
  res.f0 = ps.f0;
  res.shift = shift;
  return res;
}

}  // namespace

ScatteringResult ode_oracle(const BarrierProfile& profile, double E, double m,
                            double shift) {
  const std::function<double(double)> U = [&profile](double x) {
    return profile.value(x);
  };
  return integrate_profile(U, profile.a(), profile.b(), profile.breakpoints(),
                           E, m, shift);
}

ScatteringResult ode_oracle(const PiecewiseBarrier& barrier, double E,
                            double m, double shift) {
  const std::function<double(double)> U = [&barrier](double x) {
    double left = barrier.a;
    for (const Segment& s : barrier.segments) {
      if (x <= left + s.length) return s.height;
      left += s.length;
    }
    return 0.0;
  };
  std::vector<double> breaks;
  double left = barrier.a;
  for (std::size_t i = 0; i + 1 < barrier.segments.size(); ++i) {
    left += barrier.segments[i].length;
    breaks.push_back(left);
  }
  return integrate_profile(U, barrier.a, barrier.b, breaks, E, m, shift);
}

}  // namespace larmor
