#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dqd/lindblad.hpp"
#include "dqd/readout.hpp"
#include "support.hpp"

using namespace dqd;

namespace {

SystemParams spectroscopy_params() {
  SystemParams p;
  p.omega0 = kTwoPi * 6.2;
  p.drive_freq = p.omega0;
  p.kappa = kTwoPi * 3.1e-3;
  p.gamma_l = 0.0667;
  p.g = kTwoPi * 0.05;
  return p;
}

// |↓⟩ ⊗ (c0|0⟩ + c1|1⟩)
DensityMatrix cavity_superposition(const SpaceDescriptor& s, Complex c0, Complex c1) {
  Vector psi = Vector::Zero(s.dimension());
  psi(s.index(kQubitDown, 0)) = c0;
  psi(s.index(kQubitDown, 1)) = c1;
  return DensityMatrix::pure(s, psi);
}

}  // namespace

TEST_SUITE("readout") {
  TEST_CASE("wrap_phase maps onto (-π, π]") {
    const double pi = std::numbers::pi;
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
    CHECK(wrap_phase(0.25) == 0.25);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng), w = wrap_phase(x);
      CHECK(w > -pi);
      CHECK(w <= pi);
      CHECK(std::abs(std::remainder(x - w, 2.0 * pi)) < 1e-9);
    }
    CHECK(radians_to_degrees(pi) == doctest::Approx(180.0));
  }

  TEST_CASE("phase: resonant driven empty cavity has zero phase") {
    SystemParams p = spectroscopy_params();
    p.g = 0.0;
    p.drive_amp = 0.002;
    const SpaceDescriptor s(10);
    const DensityMatrix ss = steady_state(jc_hamiltonian(p, s), collapse_operators(p, s));
    CHECK(std::abs(phase(ss)) < 1e-10);
  }

  TEST_CASE("phase: real positive field gives π/2; empty field is undefined") {
    const SpaceDescriptor s(3);
    CHECK(phase(cavity_superposition(s, 1.0, 1.0)) == doctest::Approx(std::numbers::pi / 2.0));
    CHECK(phase(cavity_superposition(s, 1.0, Complex(0.0, 1.0))) == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(phase(DensityMatrix::basis_state(s, kQubitUp, 0)), UndefinedPhaseError);
    CHECK_THROWS_AS(phase_shift(DensityMatrix::basis_state(s, kQubitUp, 1), 0.0), UndefinedPhaseError);
  }

  TEST_CASE("phase shift: baseline and decoupled qubit") {
    SystemParams p = spectroscopy_params();
    p.drive_amp = 0.003;
    p.epsilon = kTwoPi * 5.0;
    p.tunnel_t = kTwoPi * 1.0;
    const SpaceDescriptor s(10);
    const double base = baseline_phase(p, s);
    SystemParams bare = p;
    bare.g = 0.0;
    const DensityMatrix ss_bare = steady_state(jc_hamiltonian(bare, s), collapse_operators(bare, s));
    CHECK(phase_shift(ss_bare, base) == 0.0);

    // g = 0: the field does not depend on the qubit state, so any product state qubit ⊗ field
    // reads as zero shift.
    Matrix field = Matrix::Zero(10, 10);
    for (int q = 0; q < 2; ++q) field += ss_bare.entries().block(q * 10, q * 10, 10, 10);
    std::mt19937 rng(6);
    for (int k = 0; k < 5; ++k) {
      const Matrix g = test::random_matrix(rng, 2, 2);
      Matrix rq = g * g.adjoint();
      rq /= rq.trace().real();
      const DensityMatrix prod = DensityMatrix(s, tensor(rq, field, s).entries());
      CHECK(std::abs(phase_shift(prod, base)) < 1e-12);
    }
  }

  TEST_CASE("dispersive oracle examples") {
    CHECK(dispersive_oracle(0.0, 0.1, 1.0) == 0.0);
    const double kappa = 0.02, delta = 3.0;
    const double g = std::sqrt(kappa * delta / 2.0);
    CHECK(dispersive_oracle(g, kappa, delta) == doctest::Approx(-std::numbers::pi / 4.0));
    const double v = dispersive_oracle(kTwoPi * 0.05, kTwoPi * 0.0031, kTwoPi * 1.0);
    CHECK(v == doctest::Approx(-std::atan(2.0 * 0.05 * 0.05 / 0.0031)).epsilon(1e-14));
    CHECK(v == doctest::Approx(-1.0158).epsilon(1e-4));
    CHECK(radians_to_degrees(v) == doctest::Approx(-58.2).epsilon(1e-3));
    CHECK_THROWS_AS(dispersive_oracle(0.1, 0.1, 0.0), DomainError);
  }

  TEST_CASE("property: oracle antisymmetry and monotonicity in g") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(1e-3, 2.0);
    for (int i = 0; i < 300; ++i) {
      const double g = u(rng), k = u(rng), d = u(rng), dg = u(rng);
      CHECK(dispersive_oracle(g, k, d) == -dispersive_oracle(g, k, -d));
      CHECK(std::abs(dispersive_oracle(g + dg, k, d)) >= std::abs(dispersive_oracle(g, k, d)));
    }
  }

  TEST_CASE("simulated shift agrees with the oracle in the dispersive regime") {
    // Δ ≥ 10 g and n ≤ 0.1, both signs of Δ.
    SystemParams p = spectroscopy_params();
    p.drive_amp = bare_cavity_drive(0.1, p);
    const SpaceDescriptor s(10);
    const double base = baseline_phase(p, s);
    for (double ratio : {10.0, 15.0, 40.0, -12.0, -30.0}) {
      SystemParams q = p;
      q.tunnel_t = 0.5 * (q.omega0 - ratio * q.g);
      const DensityMatrix ss = steady_state(jc_hamiltonian(q, s), collapse_operators(q, s));
      CHECK(photon_number(ss) <= 0.1 + 1e-9);
      const double sim = phase_shift(ss, base);
      const double oracle = dispersive_oracle(q.g, q.kappa, readout_detuning(q));
      CHECK(std::abs(sim - oracle) <= 0.05 * std::abs(oracle));
    }
  }

  TEST_CASE("photon number examples and bounds") {
    const SpaceDescriptor s(6);
    CHECK(photon_number(DensityMatrix::basis_state(s, kQubitUp, 0)) == 0.0);
    for (int n = 0; n < 6; ++n) CHECK(photon_number(DensityMatrix::basis_state(s, kQubitDown, n)) == doctest::Approx(n));
    std::mt19937 rng(13);
    for (int i = 0; i < 50; ++i) {
      const SpaceDescriptor si(2 + i % 9);
      const double n = photon_number(test::random_state(rng, si, 1 + i % 4));
      CHECK(n >= -1e-8);
      CHECK(n <= si.fock_levels() - 1 + 1e-12);
    }
    SystemParams p = spectroscopy_params();
    p.g = 0.0;
    p.drive_amp = 0.01;
    const SpaceDescriptor big(16);
    const DensityMatrix ss = steady_state(jc_hamiltonian(p, big), collapse_operators(p, big));
    CHECK(photon_number(ss) == doctest::Approx(4.0 * 0.01 * 0.01 / (p.kappa * p.kappa)).epsilon(1e-8));
  }

  TEST_CASE("bare-cavity drive inversion") {
    SystemParams p = spectroscopy_params();
    CHECK(bare_cavity_drive(3.8, p) == doctest::Approx(0.5 * p.kappa * std::sqrt(3.8)));
    p.drive_freq = p.omega0 + 0.01;
    CHECK(bare_cavity_drive(2.0, p) == doctest::Approx(std::sqrt(2.0 * (0.25 * p.kappa * p.kappa + 1e-4))));
  }

  TEST_CASE("calibrate_drive: bare cavity inversion") {
    SystemParams p;
    p.omega0 = kTwoPi * 6.2;
    p.drive_freq = p.omega0;
    p.kappa = kTwoPi * 1e-3;
    p.gamma_l = 0.02;
    const SpaceDescriptor s(default_fock_levels(3.8));
    const CalibrationResult c = calibrate_drive(3.8, p, s);
    CHECK(c.drive_amp == doctest::Approx(0.5 * p.kappa * std::sqrt(3.8)).epsilon(1e-3));
    CHECK(c.drive_amp / kTwoPi * 1e3 == doctest::Approx(0.975).epsilon(1e-3));
    CHECK(c.photon_number == doctest::Approx(3.8).epsilon(1e-4));
  }

  TEST_CASE("calibrate_drive: coupled idle point") {
    SystemParams p;
    p.omega0 = kTwoPi * 6.2;
    p.drive_freq = p.omega0;
    p.kappa = kTwoPi * 1e-3;
    p.gamma_l = 0.02;
    p.gamma_phi = 0.2;
    p.g = kTwoPi * 0.02;
    p.epsilon = kTwoPi * 10.0;
    p.tunnel_t = kTwoPi * 1.0;
    for (double target : {0.6, 3.8}) {
      const SpaceDescriptor s(default_fock_levels(target));
      const CalibrationResult c = calibrate_drive(target, p, s);
      SystemParams q = p;
      q.drive_amp = c.drive_amp;
      const double n = photon_number(steady_state(jc_hamiltonian(q, s), collapse_operators(q, s)));
      CHECK(std::abs(n - target) <= 0.01 * target);
      // the dispersive pull detunes the cavity, so more drive is needed than for the bare cavity
      CHECK(c.drive_amp > bare_cavity_drive(target, p));
    }
  }

  TEST_CASE("calibrate_drive: preconditions and truncation") {
    SystemParams p = spectroscopy_params();
    const SpaceDescriptor s(10);
    CHECK_THROWS_AS(calibrate_drive(0.0, p, s), PreconditionError);
    CHECK_THROWS_AS(calibrate_drive(-1.0, p, s), PreconditionError);
    SystemParams lossless = p;
    lossless.kappa = 0.0;
    CHECK_THROWS_AS(calibrate_drive(1.0, lossless, s), PreconditionError);
    CHECK_THROWS_AS(calibrate_drive(3.8, p, SpaceDescriptor(4)), TruncationError);
  }
}
