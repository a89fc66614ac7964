#include "dqd/readout.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dqd/lindblad.hpp"

namespace dqd {

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double radians_to_degrees(double rad) { return rad * (180.0 / std::numbers::pi); }

double phase(const DensityMatrix& rho) {
  const Complex a = expectation(annihilation(rho.space()), rho);
  if (std::abs(a) <= 1e-12) {
    throw UndefinedPhaseError("phase: |<a>| <= 1e-12, the field phase is undefined");
  }
  return wrap_phase(std::arg(Complex(0.0, 1.0) * a));
}

double phase_shift(const DensityMatrix& rho, double baseline_phi) {
  return wrap_phase(phase(rho) - baseline_phi);
}

double dispersive_oracle(double g, double kappa, double delta) {
  if (delta == 0.0) throw DomainError("dispersive_oracle: Delta = 0 (formula invalid at resonance)");
  return -std::atan(2.0 * g * g / (kappa * delta));
}

double photon_number(const DensityMatrix& rho) {
  return expectation(number_operator(rho.space()), rho).real();
}

double baseline_phase(const SystemParams& params, const SpaceDescriptor& space) {
  SystemParams bare = params;
  bare.g = 0.0;
  const DensityMatrix rho = steady_state(jc_hamiltonian(bare, space), collapse_operators(bare, space));
  return phase(rho);
}

double bare_cavity_drive(double target_n, const SystemParams& p) {
  const double dd = p.omega0 - p.drive_freq;
  return std::sqrt(target_n * (0.25 * p.kappa * p.kappa + dd * dd));
}

CalibrationResult calibrate_drive(double target_n, const SystemParams& params,
                                  const SpaceDescriptor& space, double rel_tol) {
  if (!(target_n > 0.0)) throw PreconditionError("calibrate_drive: target photon number must be > 0");
  if (!(params.kappa > 0.0)) throw PreconditionError("calibrate_drive: kappa must be > 0");

  SystemParams p = params;
  auto photons_at = [&](double xi) {
    p.drive_amp = xi;
    return photon_number(steady_state(jc_hamiltonian(p, space), collapse_operators(p, space)));
  };

  // n(ξ) ≈ c ξ² in the linear-response regime, so rescaling by √(target/n) is Newton-like;
  // a bracket is maintained for bisection when the rescaling overshoots.
  double xi = bare_cavity_drive(target_n, params);
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  constexpr int kMaxIterations = 60;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const double n = photons_at(xi);
    if (std::abs(n - target_n) <= rel_tol * target_n) return {xi, n, it};
    if (n < target_n) lo = std::max(lo, xi); else hi = std::min(hi, xi);
    double next = (n > 0.0) ? xi * std::sqrt(target_n / n) : 2.0 * xi;
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * xi;
    xi = next;
  }
  std::ostringstream msg;
  msg << "calibrate_drive: no convergence to n = " << target_n << " after " << kMaxIterations
      << " iterations";
  throw CalibrationError(msg.str());
}

}  // namespace dqd
