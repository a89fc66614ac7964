#include <cmath>
#include <random>

#include "doctest.h"
#include "dqd/density_matrix.hpp"
#include "support.hpp"

using namespace dqd;

TEST_SUITE("density_matrix") {
  TEST_CASE("factories satisfy the invariants") {
    const SpaceDescriptor s(4);
    const DensityMatrix b = DensityMatrix::basis_state(s, kQubitUp, 2);
    CHECK(b.population(kQubitUp, 2) == 1.0);
    CHECK(b.top_fock_population() == 0.0);
    const DensityMatrix m = DensityMatrix::maximally_mixed(s);
    CHECK(std::abs(m.population(kQubitDown, 3) - 1.0 / 8.0) < 1e-15);
    Vector psi = Vector::Zero(8);
    psi(s.index(kQubitDown, 0)) = 3.0;
    psi(s.index(kQubitUp, 1)) = Complex(0.0, 4.0);
    const DensityMatrix p = DensityMatrix::pure(s, psi);
    CHECK(std::abs(p.population(kQubitDown, 0) - 9.0 / 25.0) < 1e-15);
    CHECK(std::abs(p.min_eigenvalue()) < 1e-12);
  }

  TEST_CASE("invalid matrices are rejected") {
    const SpaceDescriptor s(2);
    Matrix rho = Matrix::Identity(4, 4) / 4.0;
    Matrix nonherm = rho;
    nonherm(0, 1) = 0.01;
    CHECK_THROWS_AS(DensityMatrix(s, nonherm), InvalidStateError);
    CHECK_THROWS_AS(DensityMatrix(s, rho * 1.01), InvalidStateError);
    Matrix negative = Matrix::Zero(4, 4);
    negative(0, 0) = 1.1;
    negative(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix(s, negative), InvalidStateError);
    CHECK_THROWS_AS(DensityMatrix(s, Matrix::Identity(6, 6) / 6.0), DimensionError);
    CHECK_THROWS_AS(DensityMatrix::pure(s, Vector::Zero(4)), PreconditionError);
  }

  TEST_CASE("tolerances at the boundary") {
    const SpaceDescriptor s(2);
    Matrix rho = Matrix::Identity(4, 4) / 4.0;
    rho(0, 0) += 5e-9;  // trace error 5e-9 < 1e-8
    CHECK_NOTHROW(DensityMatrix(s, rho));
    rho(0, 0) += 1e-8;
    CHECK_THROWS_AS(DensityMatrix(s, rho), InvalidStateError);
  }

  TEST_CASE("check_state reports measured deviations") {
    std::mt19937 rng(5);
    const DensityMatrix r = test::random_state(rng, SpaceDescriptor(3));
    const StateCheck c = check_state(r.entries());
    CHECK(c.satisfies());
    CHECK(c.trace_error < 1e-14);
    CHECK(c.min_eigenvalue > 0.0);
  }
}
