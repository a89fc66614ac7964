#include "dqd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dqd {

void SystemParams::validate() const {
  auto require = [](bool ok, const char* field, const char* rule) {
    if (!ok) throw PreconditionError(std::string("SystemParams.") + field + " must be " + rule);
  };
  require(std::isfinite(omega0) && omega0 > 0.0, "omega0", "> 0");
  require(std::isfinite(kappa) && kappa >= 0.0, "kappa", ">= 0");
  require(std::isfinite(gamma_l) && gamma_l >= 0.0, "gamma_l", ">= 0");
  require(std::isfinite(gamma_phi) && gamma_phi >= 0.0, "gamma_phi", ">= 0");
  require(std::isfinite(g) && g >= 0.0, "g", ">= 0");
  require(std::isfinite(tunnel_t) && tunnel_t >= 0.0, "tunnel_t", ">= 0");
  require(std::isfinite(drive_amp) && drive_amp >= 0.0, "drive_amp", ">= 0");
  require(std::isfinite(epsilon), "epsilon", "finite");
  require(std::isfinite(drive_freq), "drive_freq", "finite");
}

double qubit_splitting(double epsilon, double tunnel_t) {
  return std::sqrt(epsilon * epsilon + 4.0 * tunnel_t * tunnel_t);
}

DerivedQuantities derive(const SystemParams& p) {
  const double Omega = qubit_splitting(p.epsilon, p.tunnel_t);
  return {Omega, Omega - p.omega0, p.omega0 - p.drive_freq,
          p.gamma_l > 0.0 ? 1.0 / p.gamma_l : std::numeric_limits<double>::infinity()};
}

double effective_coupling(const SystemParams& p) {
  if (!p.dipole_coupling) return p.g;
  const double Omega = qubit_splitting(p.epsilon, p.tunnel_t);
  return Omega > 0.0 ? p.g * (2.0 * p.tunnel_t / Omega) : 0.0;
}

int default_fock_levels(double target_photon_number) {
  const double n = std::max(0.0, target_photon_number);
  return std::max(10, static_cast<int>(std::ceil(4.0 * n + 8.0)));
}

OperatorMatrix jc_hamiltonian(const SystemParams& p, const SpaceDescriptor& space) {
  p.validate();
  const int N = space.fock_levels();
  const DerivedQuantities d = derive(p);
  const double g = effective_coupling(p);
  const Matrix a = resonator_annihilation(N);
  const Matrix ad = a.adjoint();
  const Matrix I = Matrix::Identity(N, N);

  OperatorMatrix H = tensor(0.5 * (d.Omega - p.drive_freq) * qubit_matrix(QubitOp::sigma_z), I, space);
  H += tensor(Matrix2::Identity(), (p.omega0 - p.drive_freq) * (ad * a), space);
  H += tensor(g * qubit_matrix(QubitOp::sigma_plus), a, space);
  H += tensor(g * qubit_matrix(QubitOp::sigma_minus), ad, space);
  H += tensor(Matrix2::Identity(), p.drive_amp * (a + ad), space);
  return H;
}

Matrix2 charge_qubit_hamiltonian(double epsilon, double tunnel_t) {
  Matrix2 h;
  h << 0.5 * epsilon, tunnel_t,
       tunnel_t, -0.5 * epsilon;
  return h;
}

OperatorMatrix charge_basis_hamiltonian(const SystemParams& p, double epsilon_now,
                                        const SpaceDescriptor& space) {
  p.validate();
  const int N = space.fock_levels();
  const Matrix a = resonator_annihilation(N);
  const Matrix ad = a.adjoint();
  const Matrix I = Matrix::Identity(N, N);
  Matrix2 tau_z;
  tau_z << 1.0, 0.0,
           0.0, -1.0;

  OperatorMatrix H = tensor(charge_qubit_hamiltonian(epsilon_now, p.tunnel_t), I, space);
  H += tensor(Matrix2::Identity(), (p.omega0 - p.drive_freq) * (ad * a), space);
  H += tensor(p.g * tau_z, a + ad, space);
  H += tensor(Matrix2::Identity(), p.drive_amp * (a + ad), space);
  return H;
}

Matrix2 qubit_eigenbasis(double epsilon, double tunnel_t) {
  const double theta = std::atan2(2.0 * tunnel_t, epsilon);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Matrix2 v;
  // columns: excited, ground; rows: L, R
  v << c, -s,
       s, c;
  return v;
}

std::vector<OperatorMatrix> collapse_operators(const SystemParams& p, const SpaceDescriptor& space) {
  p.validate();
  std::vector<OperatorMatrix> ops;
  if (p.kappa > 0.0) ops.push_back(std::sqrt(p.kappa) * annihilation(space));
  if (p.gamma_l > 0.0) ops.push_back(std::sqrt(p.gamma_l) * qubit_operator(QubitOp::sigma_minus, space));
  if (p.gamma_phi > 0.0) {
    ops.push_back(std::sqrt(0.5 * p.gamma_phi) * qubit_operator(QubitOp::sigma_z, space));
  }
  return ops;
}

void PulseSequence::validate() const {
  if (!(pulse_length >= 0.0)) throw PreconditionError("PulseSequence.pulse_length must be >= 0");
  if (!(pulse_start >= 0.0)) throw PreconditionError("PulseSequence.pulse_start must be >= 0");
}

double epsilon_at(const PulseSequence& seq, double time) {
  if (time >= seq.pulse_start && time < seq.pulse_start + seq.pulse_length) return seq.pulse_epsilon;
  return seq.baseline_epsilon;
}

PulseFrameHamiltonian::PulseFrameHamiltonian(const SystemParams& idle_params, PulseSequence seq,
                                             const SpaceDescriptor& space)
    : space_(space),
      seq_(seq),
      drive_freq_(idle_params.drive_freq),
      idle_epsilon_(idle_params.epsilon),
      static_part_(jc_hamiltonian(idle_params, space).entries()),
      idle_basis_(qubit_eigenbasis(idle_params.epsilon, idle_params.tunnel_t)) {
  seq_.validate();
  const double scale = std::max(1.0, std::abs(idle_epsilon_));
  if (std::abs(seq_.baseline_epsilon - idle_epsilon_) > 1e-12 * scale) {
    throw PreconditionError("PulseFrameHamiltonian: pulse baseline differs from the idle detuning");
  }
}

Matrix PulseFrameHamiltonian::entries_at(double time) const {
  const double eps = epsilon_at(seq_, time);
  if (eps == idle_epsilon_) return static_part_;

  // Charge-basis change (ε - ε₀)/2 τ_z expressed in the idle eigenbasis.
  Matrix2 tau_z_half;
  tau_z_half << 0.5, 0.0,
                0.0, -0.5;
  Matrix2 delta = (eps - idle_epsilon_) * (idle_basis_.adjoint() * tau_z_half * idle_basis_);
  const Complex phase = std::polar(1.0, drive_freq_ * time);
  delta(kQubitUp, kQubitDown) *= phase;
  delta(kQubitDown, kQubitUp) *= std::conj(phase);

  const int N = space_.fock_levels();
  Matrix h = static_part_;
  for (int q = 0; q < 2; ++q) {
    for (int r = 0; r < 2; ++r) {
      if (delta(q, r) == Complex(0.0)) continue;
      for (int n = 0; n < N; ++n) h(q * N + n, r * N + n) += delta(q, r);
    }
  }
  return h;
}

OperatorMatrix PulseFrameHamiltonian::operator()(double time) const {
  return {space_, entries_at(time)};
}

Matrix PulseFrameHamiltonian::frame_unitary(double time) const {
  const int N = space_.fock_levels();
  Matrix u = Matrix::Zero(space_.dimension(), space_.dimension());
  for (int q = 0; q < 2; ++q) {
    const double sz = (q == kQubitUp) ? 0.5 : -0.5;
    for (int n = 0; n < N; ++n) {
      const int i = space_.index(q, n);
      u(i, i) = std::polar(1.0, drive_freq_ * time * (sz + n));
    }
  }
  return u;
}

}  // namespace dqd
