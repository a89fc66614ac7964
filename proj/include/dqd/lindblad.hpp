#pragma once

// Master-equation dynamics: dρ/dt = -i[H, ρ] + Σ_L (L ρ L† - ½{L†L, ρ}).

#include <Eigen/SparseCore>

#include <functional>
#include <vector>

#include "dqd/density_matrix.hpp"
#include "dqd/hilbert.hpp"

namespace dqd {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

inline constexpr double kTruncationGuard = 1e-4;
inline constexpr double kTraceDriftLimit = 1e-8;

// Raw-matrix right-hand side used by the integrator.
Matrix lindblad_rhs(const Matrix& rho, const Matrix& H, const std::vector<Matrix>& collapse);

Matrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H,
                    const std::vector<OperatorMatrix>& collapse);

// Column-stacked vectorisation: vec(ρ)[i + j d] = ρ(i, j).
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, int dimension);

struct Superoperator {
  SpaceDescriptor space;
  SparseMatrix matrix;  // (d² x d²), acts on vec(ρ)

  Vector apply(const Vector& v) const { return matrix * v; }
};

Superoperator liouvillian(const OperatorMatrix& H, const std::vector<OperatorMatrix>& collapse);

// Null vector of the Liouvillian with Tr ρ = 1, via sparse LU on the trace-row-replaced system.
// Falls back to long-time propagation when the factorisation fails. Throws PreconditionError
// without dissipation, ConvergenceError for a non-unique or inaccurate solution, and
// TruncationError when the top Fock level holds more than kTruncationGuard.
DensityMatrix steady_state(const OperatorMatrix& H, const std::vector<OperatorMatrix>& collapse);
DensityMatrix steady_state(const Superoperator& L);

// exp(L dt) as a dense superoperator.
struct Propagator {
  SpaceDescriptor space;
  double dt;
  Matrix matrix;

  Vector apply(const Vector& v) const { return matrix * v; }
  DensityMatrix apply(const DensityMatrix& rho) const;
};

Propagator propagator(const Superoperator& L, double dt);

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;  // 0: unbounded
  long max_steps = 50'000'000;
  double truncation_guard = kTruncationGuard;  // infinity disables the check
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  long accepted_steps = 0;
  long rejected_steps = 0;
  double max_top_fock_population = 0.0;
  double max_trace_drift = 0.0;
};

struct TimeSpan {
  double start;
  double stop;
};

using HamiltonianFn = std::function<Matrix(double)>;

// Adaptive Dormand-Prince 5(4) integration of the master equation. Sample times must lie in
// the span; they are hit exactly and need not include the end point. Throws
// IntegrationError on step-size underflow, TruncationError when the guard trips and
// NumericalError when the trace drifts by more than kTraceDriftLimit.
Trajectory evolve(const DensityMatrix& rho0, const HamiltonianFn& hamiltonian_at,
                  const std::vector<OperatorMatrix>& collapse, TimeSpan span,
                  std::vector<double> sample_times, const EvolveOptions& options = {});

Trajectory evolve(const DensityMatrix& rho0, const OperatorMatrix& H,
                  const std::vector<OperatorMatrix>& collapse, TimeSpan span,
                  std::vector<double> sample_times, const EvolveOptions& options = {});

}  // namespace dqd
