#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "dqd/lindblad.hpp"
#include "dqd/model.hpp"
#include "support.hpp"

using namespace dqd;

namespace {

SystemParams resonant(double g) {
  SystemParams p;
  p.omega0 = kTwoPi * 6.2;
  p.drive_freq = p.omega0;
  p.tunnel_t = 0.5 * p.omega0;
  p.g = g;
  return p;
}

EvolveOptions tight() {
  EvolveOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  o.truncation_guard = std::numeric_limits<double>::infinity();
  return o;
}

}  // namespace

TEST_SUITE("evolve") {
  TEST_CASE("resonant vacuum Rabi: P_up = cos²(gτ)") {
    const SystemParams p = resonant(kTwoPi * 0.05);
    const SpaceDescriptor s(3);
    std::vector<double> times;
    for (int i = 0; i <= 50; ++i) times.push_back(0.4 * i);
    const Trajectory tr = evolve(DensityMatrix::basis_state(s, kQubitUp, 0), jc_hamiltonian(p, s), {},
                                 {0.0, 20.0}, times);
    REQUIRE(tr.states.size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double c = std::cos(p.g * times[i]);
      CHECK(std::abs(tr.states[i].population(kQubitUp, 0) - c * c) < 1e-7);
    }
  }

  TEST_CASE("zero generator leaves the state unchanged") {
    std::mt19937 rng(4);
    const SpaceDescriptor s(3);
    const DensityMatrix rho = test::random_state(rng, s);
    EvolveOptions o;
    o.truncation_guard = std::numeric_limits<double>::infinity();
    const Trajectory tr = evolve(rho, OperatorMatrix::zero(s), {}, {0.0, 5.0}, {1.0, 2.0, 5.0}, o);
    for (const auto& st : tr.states) CHECK(test::max_abs(st.entries() - rho.entries()) < 1e-12);
  }

  TEST_CASE("unitary limit matches eigendecomposition over 100 periods") {
    SystemParams p = resonant(0.3);
    p.drive_freq = p.omega0 - 0.2;
    p.drive_amp = 0.05;
    const SpaceDescriptor s(6);
    const OperatorMatrix h = jc_hamiltonian(p, s);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    const Eigen::VectorXd ev = es.eigenvalues();
    double slowest = std::numeric_limits<double>::infinity();
    for (int i = 1; i < ev.size(); ++i) {
      const double gap = ev(i) - ev(i - 1);
      if (gap > 1e-6) slowest = std::min(slowest, gap);
    }
    const double T = 100.0 * kTwoPi / slowest;
    const DensityMatrix rho0 = DensityMatrix::basis_state(s, kQubitUp, 0);
    const Trajectory tr = evolve(rho0, h, {}, {0.0, T}, {T}, tight());
    Eigen::VectorXcd phases(ev.size());
    for (int i = 0; i < ev.size(); ++i) phases(i) = std::exp(Complex(0.0, -ev(i) * T));
    const Matrix U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const Matrix exact = U * rho0.entries() * U.adjoint();
    CHECK(test::max_abs(tr.states.back().entries() - exact) < 1e-8);
  }

  TEST_CASE("trajectory invariants along a damped driven run") {
    SystemParams p = resonant(0.2);
    p.kappa = 0.4;
    p.gamma_l = 0.1;
    p.gamma_phi = 0.2;
    p.drive_amp = 0.1;
    p.drive_freq = p.omega0 + 0.1;
    const SpaceDescriptor s(10);
    std::vector<double> times;
    for (int i = 1; i <= 80; ++i) times.push_back(0.5 * i);
    const Trajectory tr = evolve(DensityMatrix::basis_state(s, kQubitUp, 2), jc_hamiltonian(p, s),
                                 collapse_operators(p, s), {0.0, 40.0}, times);
    REQUIRE(tr.times.size() == times.size());
    for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
    for (const auto& st : tr.states) {
      CHECK(st.min_eigenvalue() > -1e-8);
      CHECK(std::abs(st.entries().trace() - Complex(1.0)) < 1e-12);
    }
    CHECK(tr.max_trace_drift < 1e-8);
    CHECK(tr.accepted_steps > 0);
    CHECK(tr.max_top_fock_population < 1e-4);
  }

  TEST_CASE("sample times are validated and may start at the span start") {
    const SpaceDescriptor s(2);
    const DensityMatrix rho = DensityMatrix::basis_state(s, kQubitDown, 0);
    const OperatorMatrix h = jc_hamiltonian(resonant(0.1), s);
    CHECK_THROWS_AS(evolve(rho, h, {}, {0.0, 1.0}, {2.0}), PreconditionError);
    CHECK_THROWS_AS(evolve(rho, h, {}, {0.0, 1.0}, {0.5, 0.5}), PreconditionError);
    CHECK_THROWS_AS(evolve(rho, h, {}, {1.0, 0.0}, {0.5}), PreconditionError);
    const Trajectory tr = evolve(rho, h, {}, {0.0, 1.0}, {0.0, 0.5});
    CHECK(tr.times.size() == 2);
    CHECK(tr.times[0] == 0.0);
    CHECK(tr.times[1] == 0.5);
  }

  TEST_CASE("truncation guard trips during evolution") {
    SystemParams p = resonant(0.0);
    p.kappa = 0.01;
    p.gamma_l = 0.01;
    p.drive_amp = 1.0;
    const SpaceDescriptor s(3);
    CHECK_THROWS_AS(evolve(DensityMatrix::basis_state(s, kQubitDown, 0), jc_hamiltonian(p, s),
                           collapse_operators(p, s), {0.0, 10.0}, {10.0}),
                    TruncationError);
  }

  TEST_CASE("step budget exhaustion raises an integration error") {
    const SpaceDescriptor s(3);
    EvolveOptions o;
    o.max_steps = 3;
    CHECK_THROWS_AS(evolve(DensityMatrix::basis_state(s, kQubitUp, 0), jc_hamiltonian(resonant(0.3), s), {},
                           {0.0, 100.0}, {100.0}, o),
                    IntegrationError);
  }

  TEST_CASE("time-dependent generator is sampled at the stage times") {
    // H(t) = f(t) σ_z with f(t) = 2t keeps populations and rotates coherences by t².
    const SpaceDescriptor s(2);
    const OperatorMatrix sz = qubit_operator(QubitOp::sigma_z, s);
    Vector psi = Vector::Zero(4);
    psi(s.index(kQubitUp, 0)) = 1.0;
    psi(s.index(kQubitDown, 0)) = 1.0;
    const Trajectory tr = evolve(DensityMatrix::pure(s, psi), [&](double t) { return Matrix(2.0 * t * sz.entries()); },
                                 {}, {0.0, 2.0}, {2.0}, tight());
    // ρ_{↑↓}(t) = ½ exp(-2i ∫ f) = ½ exp(-2i t²)
    const Complex expected = 0.5 * std::exp(Complex(0.0, -8.0));
    CHECK(std::abs(tr.states.back().entries()(s.index(kQubitUp, 0), s.index(kQubitDown, 0)) - expected) < 1e-9);
  }
}
