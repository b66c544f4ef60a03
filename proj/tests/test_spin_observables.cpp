#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "larmor/clock.hpp"
#include "larmor/spin_observables.hpp"

using namespace larmor;

namespace {

PiecewiseBarrier rect(double U0, double d) {
  return BarrierProfile::rectangular(U0, d).exact_or_discretized(1);
}

Complex mat_elem(const Mat4& M, const FourSpinor& a, const FourSpinor& b) {
  Complex s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += std::conj(a[i]) * M[i][j] * b[j];
  return s;
}

}  // namespace

TEST_CASE("sigma4: Pauli algebra Sigma_i Sigma_j = delta_ij + i eps_ijk Sigma_k") {
  const auto mul = [](const Mat4& A, const Mat4& B) {
    Mat4 C{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) C[i][j] += A[i][k] * B[k][j];
    return C;
  };
  const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                            {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                            {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const Mat4 prod = mul(sigma4(i), sigma4(j));
      Mat4 expect{};
      for (int r = 0; r < 4; ++r) {
        if (i == j) expect[r][r] = 1.0;
      }
      for (int k = 1; k <= 3; ++k) {
        const int e = eps[i - 1][j - 1][k - 1];
        if (e == 0) continue;
        const Mat4 Sk = sigma4(k);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c)
            expect[r][c] += Complex(0.0, static_cast<double>(e)) * Sk[r][c];
      }
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(std::abs(prod[r][c] - expect[r][c]) < 1e-15);
    }
  }
}

TEST_CASE("spin_expect_exact matches the explicit bilinear") {
  const FourSpinor psi = spin_coherent_spinor({1.1, 0.7}, 0.4);
  const SpinVector sv = spin_expect_exact(psi);
  CHECK(sv.s1 == doctest::Approx(0.5 * mat_elem(sigma4(1), psi, psi).real()));
  CHECK(sv.s2 == doctest::Approx(0.5 * mat_elem(sigma4(2), psi, psi).real()));
  CHECK(sv.s3 == doctest::Approx(0.5 * mat_elem(sigma4(3), psi, psi).real()));
}

TEST_CASE("incident coherent state: expected spin components") {
  const double theta = M_PI / 2.0, phi = 0.3, f0 = 0.3;
  const SpinVector sv = spin_expect_exact(spin_coherent_spinor({theta, phi}, f0));
  const double squash = (1.0 - f0 * f0) / (1.0 + f0 * f0);
  CHECK(sv.s1 == doctest::Approx(0.5 * std::sin(theta) * std::cos(phi)).epsilon(1e-12));
  CHECK(sv.s2 == doctest::Approx(0.5 * squash * std::sin(theta) * std::sin(phi)).epsilon(1e-12));
  CHECK(sv.s3 == doctest::Approx(0.5 * squash * std::cos(theta)).epsilon(1e-12));
}

TEST_CASE("free_precession: t = 0 matches the incident state, period 2pi/omega") {
  const SpinOrientation o{M_PI / 3.0, 0.9};
  const double f0 = 0.25, omega = 2e-6;
  const SpinVector s0 = free_precession(o, f0, omega, 0.0);
  const SpinVector inc = spin_expect_exact(spin_coherent_spinor(o, f0));
  CHECK(s0.s1 == doctest::Approx(inc.s1).epsilon(1e-12));
  CHECK(s0.s2 == doctest::Approx(inc.s2).epsilon(1e-12));
  CHECK(s0.s3 == doctest::Approx(inc.s3).epsilon(1e-12));

  const SpinVector sp = free_precession(o, f0, omega, 2.0 * M_PI / omega);
  CHECK(sp.s1 == doctest::Approx(s0.s1).epsilon(1e-9));
  CHECK(sp.s2 == doctest::Approx(s0.s2).epsilon(1e-9));
}

TEST_CASE("extract_precession_time: roundtrip through free precession") {
  const SpinOrientation o{M_PI / 2.0, 0.4};
  const double f0 = 0.3, omega = 2e-6;
  for (double t : {0.1, 0.7, 1.3}) {
    const SpinVector sv = free_precession(o, f0, omega, t);
    const PrecessionReading r = extract_precession_time(sv, o, f0, omega);
    CHECK(r.time == doctest::Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("extract_precession_time: degenerate orientations rejected") {
  const SpinVector sv{0.1, 0.1, 0.0};
  CHECK_THROWS_AS(extract_precession_time(sv, {0.0, 0.0}, 0.3, 1e-6),
                  PoleOrientation);
  CHECK_THROWS_AS(extract_precession_time(sv, {M_PI, 0.0}, 0.3, 1e-6),
                  PoleOrientation);
  CHECK_THROWS_AS(extract_precession_time(sv, {M_PI / 2.0, 0.0}, 0.9999999, 1e-6),
                  UltraRelativisticDegeneracy);
}

TEST_CASE("exact vs first order: transmitted spin converges at order V^2") {
  const PiecewiseBarrier pb = rect(1.0, 1.0);
  const double E = 1.2, m = 1.0;
  const SpinOrientation o{M_PI / 2.0, 0.0};
  const double f0 = ParticleState::make(E, m).f0;
  const SmallFieldInputs in = small_field_inputs(pb, E, m);

  double prev_err = 1.0;
  for (double V : {1e-3, 5e-4, 2.5e-4}) {
    const ChannelPair pair = scatter_spin(pb, E, m, V);
    const SpinVector exact = transmitted_spin(pair, o, f0);
    const SpinVector first = transmitted_spin_first_order(in, o, V);
    const double err = std::hypot(exact.s1 - first.s1, exact.s2 - first.s2,
                                  exact.s3 - first.s3);
    CHECK(err < 0.35 * prev_err);  // halving V must shrink the gap ~4x
    prev_err = err;
  }
}

TEST_CASE("summed s3 is V-independent to first order") {
  const PiecewiseBarrier pb = rect(1.0, 1.0);
  const double E = 1.2, m = 1.0, f0 = ParticleState::make(E, m).f0;
  const SpinOrientation o{M_PI / 3.0, 0.2};
  const SpinVector base = summed_spin(scatter_spin(pb, E, m, 0.0), o, f0);
  for (double V : {1e-4, 1e-5}) {
    const SpinVector sv = summed_spin(scatter_spin(pb, E, m, V), o, f0);
    CHECK(std::abs(sv.s3 - base.s3) < 100.0 * V * V);
  }
}

TEST_CASE("spin clock readout reproduces the Larmor time") {
  const PiecewiseBarrier pb = rect(1.0, 1.0);
  const double E = 1.2, m = 1.0, V = 1e-6;
  const double f0 = ParticleState::make(E, m).f0;
  const SpinOrientation o{M_PI / 2.0, 0.0};

  const ChannelPair pair = scatter_spin(pb, E, m, V);
  const SpinVector sv = summed_spin(pair, o, f0);
  const PrecessionReading r = extract_precession_time(sv, o, f0, 2.0 * V);

  const LarmorTime lt = larmor_time(pb, E, m);
  CHECK(r.time == doctest::Approx(lt.tau_L).epsilon(1e-5));
  CHECK(lt.tau_L == doctest::Approx(dwell_time(pb, E, m)).epsilon(1e-6));
}

TEST_CASE("small_field_inputs: dalpha is minus the transmission time") {
  const PiecewiseBarrier pb = rect(1.0, 1.0);
  const SmallFieldInputs in = small_field_inputs(pb, 1.2, 1.0);
  const PhaseTimes pt = phase_times(pb, 1.2, 1.0);
  CHECK(in.dalpha == doctest::Approx(-pt.tau_T).epsilon(1e-8));
  CHECK(in.dbeta == doctest::Approx(-pt.tau_R).epsilon(1e-8));
}
