#pragma once

#include "dqd/density_matrix.hpp"
#include "dqd/model.hpp"

namespace dqd {

struct PhaseSample {
  double time;            // ns
  double phi;             // radians, (-π, π]
  double photon_number;
};

// Principal value in (-π, π].
double wrap_phase(double phi);

double radians_to_degrees(double rad);

// arg(i ⟨a⟩). Throws UndefinedPhaseError when |⟨a⟩| <= 1e-12.
double phase(const DensityMatrix& rho);

// wrap(phase(rho) - baseline_phi).
double phase_shift(const DensityMatrix& rho, double baseline_phi);

// -arctan(2g² / (κ Δ)). Δ is the resonator-qubit detuning ω₀ - Ω, the sign for which the
// formula agrees with arg(i⟨a⟩) under jc_hamiltonian. Throws DomainError when Δ = 0.
double dispersive_oracle(double g, double kappa, double delta);

// Detuning in the sign convention of dispersive_oracle.
inline double readout_detuning(const SystemParams& p) { return -derive(p).Delta; }

double photon_number(const DensityMatrix& rho);

// Phase of the same driven system with g = 0 (the bare cavity).
double baseline_phase(const SystemParams& params, const SpaceDescriptor& space);

// Drive amplitude giving a bare (g = 0) cavity steady photon number n: ξ = √(n (κ²/4 + Δ_d²)).
double bare_cavity_drive(double target_n, const SystemParams& params);

struct CalibrationResult {
  double drive_amp;
  double photon_number;
  int iterations;
};

// Drive amplitude ξ for which the full coupled steady state (qubit at params' ε, t) holds
// target_n photons within `rel_tol`. Seeded with bare_cavity_drive; throws PreconditionError
// for target_n <= 0 or κ = 0 and CalibrationError on non-convergence.
CalibrationResult calibrate_drive(double target_n, const SystemParams& params,
                                  const SpaceDescriptor& space, double rel_tol = 1e-4);

}  // namespace dqd
