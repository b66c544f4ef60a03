#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "larmor/scattering.hpp"

using namespace larmor;

namespace {

PiecewiseBarrier rect(double U0, double d) {
  return BarrierProfile::rectangular(U0, d).exact_or_discretized(1);
}

PiecewiseBarrier random_barrier(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nseg(2, 8);
  std::uniform_real_distribution<double> len(0.1, 1.0);
  std::uniform_real_distribution<double> hgt(0.0, 2.0);
  PiecewiseBarrier pb;
  const int n = nseg(rng);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    pb.segments.push_back({len(rng), hgt(rng)});
    total += pb.segments.back().length;
  }
  pb.a = -total / 2.0;
  pb.b = total / 2.0;
  return pb;
}

}  // namespace

TEST_CASE("transfer matrix: semigroup property of propagation") {
  const ChannelKinematics kin = kinematics(1.2, 1.0, 1.0);
  const TransferMatrix whole = segment_matrix(kin, 0.7);
  const TransferMatrix split = segment_matrix(kin, 0.3) * segment_matrix(kin, 0.4);
  const TransferMatrix a = whole.dense();
  const TransferMatrix b = split.dense();
  CHECK(std::abs(a.m00 - b.m00) < 1e-13);
  CHECK(std::abs(a.m01 - b.m01) < 1e-13);
  CHECK(std::abs(a.m10 - b.m10) < 1e-13);
  CHECK(std::abs(a.m11 - b.m11) < 1e-13);
}

TEST_CASE("transfer matrix: propagating segment is a pure phase") {
  const ChannelKinematics kin = kinematics(std::sqrt(2.0), 1.0, 0.0);
  const TransferMatrix M = segment_matrix(kin, 2.0);
  CHECK(M.log_scale == 0.0);
  CHECK(std::abs(M.m00 - std::polar(1.0, 2.0)) < 1e-15);
  CHECK(std::abs(M.m11 - std::polar(1.0, -2.0)) < 1e-15);
  CHECK(std::abs(M.m01) == 0.0);
  CHECK(std::abs(M.m10) == 0.0);
}

TEST_CASE("transfer matrix: dense() overflows past the double range") {
  const ChannelKinematics kin = kinematics(1.2, 1.0, 1.0);
  const TransferMatrix M = segment_matrix(kin, 500.0);
  CHECK(M.log_scale > 700.0);
  CHECK_THROWS_AS(M.dense(), Overflow);
}

TEST_CASE("interface matrix: identity when media match, inverse pairing") {
  const Complex f(0.3, 0.0);
  const TransferMatrix I = interface_matrix(f, f);
  CHECK(std::abs(I.m00 - 1.0) < 1e-15);
  CHECK(std::abs(I.m01) < 1e-15);

  const Complex g(0.0, 0.5);
  const TransferMatrix fwd = interface_matrix(f, g);
  const TransferMatrix bwd = interface_matrix(g, f);
  const TransferMatrix P = (fwd * bwd).dense();
  CHECK(std::abs(P.m00 - 1.0) < 1e-14);
  CHECK(std::abs(P.m01) < 1e-14);
  CHECK(std::abs(P.m10) < 1e-14);
  CHECK(std::abs(P.m11 - 1.0) < 1e-14);
}

TEST_CASE("scatter_channel: zero barrier transmits the coherent state") {
  PiecewiseBarrier pb;
  pb.a = -0.5;
  pb.b = 0.5;
  pb.segments = {{1.0, 0.0}};
  const ScatteringResult res = scatter_channel(pb, 1.2, 1.0);
  const double expect = 1.0 / std::sqrt(1.0 + res.f0 * res.f0);
  CHECK(std::abs(res.T - expect) < 1e-15);
  CHECK(std::abs(res.R) < 1e-15);
  CHECK(res.f0 == doctest::Approx(0.30151134457776363).epsilon(1e-15));
}

TEST_CASE("scatter_channel: unitarity on random barriers") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const PiecewiseBarrier pb = random_barrier(rng);
    const double E = 1.05 + 1.9 * std::generate_canonical<double, 53>(rng);
    try {
      const ScatteringResult res = scatter_channel(pb, E, 1.0);
      CHECK(res.unitarity_residual() < 1e-12);
    } catch (const ThresholdEnergy&) {
    }
  }
}

TEST_CASE("scatter_channel: reciprocity of |T| under barrier reversal") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    PiecewiseBarrier pb = random_barrier(rng);
    const double E = 1.1 + 1.5 * std::generate_canonical<double, 53>(rng);
    try {
      const double t_fwd = std::abs(scatter_channel(pb, E, 1.0).T);
      std::reverse(pb.segments.begin(), pb.segments.end());
      const double t_bwd = std::abs(scatter_channel(pb, E, 1.0).T);
      CHECK(std::abs(t_fwd - t_bwd) < 1e-12);
    } catch (const ThresholdEnergy&) {
    }
  }
}

TEST_CASE("scatter_channel: opaque barrier stays finite via the log scale") {
  const ScatteringResult res = scatter_channel(rect(1.0, 200.0), 1.2, 1.0);
  CHECK(std::isfinite(res.T.real()));
  CHECK(std::abs(res.T) > 0.0);
  CHECK(std::abs(res.T) < 1e-100);
  CHECK(res.unitarity_residual() < 1e-12);
}

TEST_CASE("scatter_spin: V = 0 collapses to a single channel") {
  const ChannelPair pair = scatter_spin(rect(1.0, 1.0), 1.2, 1.0, 0.0);
  CHECK(pair.minus.T == pair.plus.T);
  CHECK(pair.minus.R == pair.plus.R);
}

TEST_CASE("scatter_spin: aligned channel transmits better under the barrier") {
  const ChannelPair pair = scatter_spin(rect(1.0, 1.0), 1.2, 1.0, 1e-6);
  CHECK(std::abs(pair.minus.T) > std::abs(pair.plus.T));
}

TEST_CASE("interior field: density continuous across interfaces") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const PiecewiseBarrier pb = random_barrier(rng);
    const double E = 1.1 + 1.5 * std::generate_canonical<double, 53>(rng);
    try {
      const InteriorField field = interior_field(pb, E, 1.0);
      double x = pb.a;
      for (std::size_t s = 0; s + 1 < pb.segments.size(); ++s) {
        x += pb.segments[s].length;
        const double left = field.density(x - 1e-10);
        const double right = field.density(x + 1e-10);
        CHECK(std::abs(left - right) < 1e-6 * std::max(1.0, left));
      }
    } catch (const ThresholdEnergy&) {
    }
  }
}

TEST_CASE("interior field: zero barrier has unit density everywhere") {
  PiecewiseBarrier pb;
  pb.a = -1.0;
  pb.b = 1.0;
  pb.segments = {{2.0, 0.0}};
  const InteriorField field = interior_field(pb, 1.4, 1.0);
  for (double x : {-0.9, -0.3, 0.0, 0.6, 0.99})
    CHECK(field.density(x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(field.integrated_density() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("interior field: opaque barrier density decays monotonically") {
  const InteriorField field = interior_field(rect(2.0, 3.0), 1.2, 1.0);
  double prev = field.density(-2.9);
  for (double x = -2.5; x < 3.0; x += 0.5) {
    const double rho = field.density(x);
    CHECK(rho < prev);
    prev = rho;
  }
}

TEST_CASE("ode oracle: agrees with the transfer matrix on a rectangle") {
  const ScatteringResult tm = scatter_channel(rect(1.0, 1.0), 1.2, 1.0);
  const ScatteringResult ode = ode_oracle(rect(1.0, 1.0), 1.2, 1.0);
  CHECK(std::abs(tm.T - ode.T) < 1e-8);
  CHECK(std::abs(tm.R - ode.R) < 1e-8);
}

TEST_CASE("ode oracle: smooth Gaussian matched by refinement") {
  const double w = 0.6;
  std::vector<double> x, U;
  for (int i = 0; i <= 512; ++i) {
    x.push_back(-4.0 * w + 8.0 * w * i / 512.0);
    U.push_back(1.2 * std::exp(-x.back() * x.back() / (w * w)));
  }
  const BarrierProfile profile = BarrierProfile::sampled(x, U);
  const double E = 1.3, m = 1.0;
  const ScatteringResult ode = ode_oracle(profile, E, m);
  CHECK(ode.unitarity_residual() < 1e-8);

  double prev = 1.0;
  for (std::size_t n : {256, 1024, 4096}) {
    const ScatteringResult tm = scatter_channel(discretize(profile, n), E, m);
    const double diff = std::abs(tm.T - ode.T);
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-6);
}
