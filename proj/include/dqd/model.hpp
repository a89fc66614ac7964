#pragma once

// Physical model of a double-quantum-dot charge qubit coupled to a driven, lossy
// resonator. Units: hbar = 1, frequencies and rates in rad/ns, times in ns.

#include <vector>

#include "dqd/hilbert.hpp"

namespace dqd {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct SystemParams {
  double omega0 = 0.0;      // resonator frequency
  double kappa = 0.0;       // resonator decay rate
  double gamma_l = 0.0;     // qubit relaxation rate (1/ns)
  double gamma_phi = 0.0;   // qubit pure dephasing rate (1/ns)
  double g = 0.0;           // qubit-resonator coupling
  double epsilon = 0.0;     // charge detuning ε/ħ
  double tunnel_t = 0.0;    // tunnelling t/ħ (the splitting at ε = 0 is 2t)
  double drive_freq = 0.0;  // probe frequency ω_d
  double drive_amp = 0.0;   // probe amplitude ξ
  // Scale g by the dipole factor 2t/Ω. Off by default: g is taken independent of (ε, t).
  bool dipole_coupling = false;

  // Throws PreconditionError naming the offending field.
  void validate() const;
};

struct DerivedQuantities {
  double Omega;    // qubit splitting sqrt(ε² + 4t²)
  double Delta;    // Ω - ω₀
  double Delta_d;  // ω₀ - ω_d
  double T1;       // 1/γ_l, +inf when γ_l = 0
};

DerivedQuantities derive(const SystemParams& params);

double qubit_splitting(double epsilon, double tunnel_t);

// Coupling constant entering the Jaynes-Cummings term (g, or g·2t/Ω with dipole_coupling).
double effective_coupling(const SystemParams& params);

// Resonator truncation for an intended steady photon number: max(10, ceil(4 n + 8)).
int default_fock_levels(double target_photon_number);

// Rotating frame at ω_d: (Ω-ω_d)/2 σ_z + (ω₀-ω_d) a†a + g(σ₊a + σ₋a†) + ξ(a + a†).
OperatorMatrix jc_hamiltonian(const SystemParams& params, const SpaceDescriptor& space);

// Qubit block (ε/2) τ_z + t τ_x in the charge basis (|L⟩, |R⟩).
Matrix2 charge_qubit_hamiltonian(double epsilon, double tunnel_t);

// (ε_now/2) τ_z + t τ_x + (ω₀-ω_d) a†a + g τ_z (a + a†) + ξ(a + a†), charge basis (|L⟩,|R⟩)
// in the qubit slot. The coupling is static, so this is the lab-frame model when ω_d = 0.
OperatorMatrix charge_basis_hamiltonian(const SystemParams& params, double epsilon_now,
                                        const SpaceDescriptor& space);

inline constexpr int kChargeL = 0;
inline constexpr int kChargeR = 1;

// Eigenvectors of charge_qubit_hamiltonian as columns (excited, ground), so that
// V† H V = diag(+Ω/2, -Ω/2). Phases are fixed so that ⟨R|ground⟩ > 0 and ⟨L|excited⟩ >= 0.
Matrix2 qubit_eigenbasis(double epsilon, double tunnel_t);

// [√κ a, √γ_l σ₋, √(γ_φ/2) σ_z]; channels with zero rate are omitted.
std::vector<OperatorMatrix> collapse_operators(const SystemParams& params,
                                               const SpaceDescriptor& space);

struct PulseSequence {
  double baseline_epsilon = 0.0;
  double pulse_start = 0.0;
  double pulse_length = 0.0;
  double pulse_epsilon = 0.0;

  void validate() const;
};

// pulse_epsilon on [pulse_start, pulse_start + pulse_length), baseline elsewhere.
double epsilon_at(const PulseSequence& seq, double time);

// Generator for the detuning pulse, written in the same frame as jc_hamiltonian at the idle
// point (params.epsilon): qubit in the idle eigenbasis, qubit and resonator rotating at ω_d.
// The charge-basis qubit block at ε(τ) is mapped exactly into that frame, which leaves
// e^{±iω_d τ} phases on its off-diagonal part; coupling and drive keep their RWA form.
// At ε(τ) equal to the idle detuning this is identical to jc_hamiltonian.
class PulseFrameHamiltonian {
 public:
  PulseFrameHamiltonian(const SystemParams& idle_params, PulseSequence seq,
                        const SpaceDescriptor& space);

  OperatorMatrix operator()(double time) const;
  Matrix entries_at(double time) const;

  const SpaceDescriptor& space() const noexcept { return space_; }

  // Frame unitary exp(iω_d τ (σ_z/2 + a†a)) taking lab-frame states (idle eigenbasis) to
  // the rotating frame at absolute time τ.
  Matrix frame_unitary(double time) const;

 private:
  SpaceDescriptor space_;
  PulseSequence seq_;
  double drive_freq_;
  double idle_epsilon_;
  Matrix static_part_;   // jc_hamiltonian at the idle point
  Matrix2 idle_basis_;   // columns: excited, ground in charge basis
};

}  // namespace dqd
