#include "dqd/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "dqd/errors.hpp"
#include "dqd/readout.hpp"

namespace dqd {

namespace {

SelftestCheck below(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, true, value < threshold};
}

SelftestCheck above(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, false, value > threshold};
}

double min_eigenvalue(const Trajectory& tr) {
  double m = 1.0;
  for (const auto& s : tr.states) m = std::min(m, s.min_eigenvalue());
  return m;
}

// Damped, driven, slightly detuned system small enough to evolve quickly.
SystemParams small_damped_system() {
  SystemParams p;
  p.omega0 = kTwoPi * 1.0;
  p.drive_freq = p.omega0 + 0.05;
  p.kappa = 0.5;
  p.gamma_l = 0.4;
  p.gamma_phi = 0.3;
  p.g = 0.2;
  p.tunnel_t = 0.5 * (p.omega0 + 0.1);
  p.drive_amp = 0.15;
  return p;
}

}  // namespace

double vacuum_rabi_frequency(double g, int periods) {
  if (!(g > 0.0) || periods < 2) throw PreconditionError("vacuum_rabi_frequency: need g > 0, periods >= 2");
  SystemParams p;
  p.omega0 = kTwoPi * 6.2;
  p.drive_freq = p.omega0;
  p.tunnel_t = 0.5 * p.omega0;
  p.g = g;
  const SpaceDescriptor space(4);
  const OperatorMatrix H = jc_hamiltonian(p, space);
  const OperatorMatrix sz = qubit_operator(QubitOp::sigma_z, space);

  const double period = kTwoPi / (2.0 * g);
  const double T = periods * period;
  const int samples = 400 * periods;
  std::vector<double> times(samples + 1);
  for (int i = 0; i <= samples; ++i) times[i] = T * i / samples;
  EvolveOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  const Trajectory tr = evolve(DensityMatrix::basis_state(space, kQubitUp, 0), H, {}, {0.0, T},
                               times, opt);

  std::vector<double> z(tr.states.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = expectation(sz, tr.states[i]).real();
  // ⟨σ_z⟩ is at an inflection point at its zeros, so the cubic through four samples around
  // each crossing locates it far below the sampling interval.
  std::vector<double> crossings;
  for (std::size_t i = 1; i + 2 < z.size(); ++i) {
    if ((z[i] > 0.0) == (z[i + 1] > 0.0)) continue;
    const double x[4] = {tr.times[i - 1], tr.times[i], tr.times[i + 1], tr.times[i + 2]};
    const double y[4] = {z[i - 1], z[i], z[i + 1], z[i + 2]};
    auto poly = [&](double t) {
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) {
        double w = y[a];
        for (int b = 0; b < 4; ++b)
          if (b != a) w *= (t - x[b]) / (x[a] - x[b]);
        acc += w;
      }
      return acc;
    };
    double lo = x[1], hi = x[2];
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((poly(mid) > 0.0) == (poly(lo) > 0.0)) lo = mid; else hi = mid;
    }
    crossings.push_back(0.5 * (lo + hi));
  }
  if (crossings.size() < 3) throw AnalysisError("vacuum_rabi_frequency: too few zero crossings");
  // Consecutive zeros are half a period apart; least-squares slope of crossing time vs index.
  const double n = static_cast<double>(crossings.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    sx += k;
    sy += crossings[k];
    sxx += static_cast<double>(k) * k;
    sxy += k * crossings[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return 1.0 / (2.0 * slope);
}

BareCavityComparison bare_cavity_amplitude(const SystemParams& params, int fock_levels) {
  SystemParams p = params;
  p.g = 0.0;
  const SpaceDescriptor space(fock_levels);
  const DensityMatrix rho = steady_state(jc_hamiltonian(p, space), collapse_operators(p, space));
  const Complex i(0.0, 1.0);
  const double dd = p.omega0 - p.drive_freq;
  return {expectation(annihilation(space), rho), -i * p.drive_amp / (0.5 * p.kappa + i * dd)};
}

double steady_vs_evolve_error(const SystemParams& params, int fock_levels, double duration) {
  const SpaceDescriptor space(fock_levels);
  const OperatorMatrix H = jc_hamiltonian(params, space);
  const auto collapse = collapse_operators(params, space);
  const DensityMatrix ss = steady_state(H, collapse);
  EvolveOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  const Trajectory tr = evolve(DensityMatrix::basis_state(space, kQubitDown, 0), H, collapse,
                               {0.0, duration}, {duration}, opt);
  return (tr.states.back().entries() - ss.entries()).cwiseAbs().maxCoeff();
}

std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> checks;

  // Conservation along trajectories: damped-driven JC, free vacuum Rabi, and a detuning pulse.
  double drift = 0.0;
  double min_eig = 1.0;
  {
    const SystemParams p = small_damped_system();
    const SpaceDescriptor space(6);
    std::vector<double> times;
    for (int i = 1; i <= 200; ++i) times.push_back(0.25 * i);
    const Trajectory tr = evolve(DensityMatrix::basis_state(space, kQubitUp, 0), jc_hamiltonian(p, space),
                                 collapse_operators(p, space), {0.0, 50.0}, times);
    drift = std::max(drift, tr.max_trace_drift);
    min_eig = std::min(min_eig, min_eigenvalue(tr));
  }
  {
    SystemParams p;
    p.omega0 = kTwoPi * 6.2;
    p.drive_freq = p.omega0;
    p.tunnel_t = 0.5 * p.omega0;
    p.g = kTwoPi * 0.05;
    const SpaceDescriptor space(3);
    std::vector<double> times;
    for (int i = 1; i <= 100; ++i) times.push_back(0.5 * i);
    const Trajectory tr = evolve(DensityMatrix::basis_state(space, kQubitUp, 0), jc_hamiltonian(p, space),
                                 {}, {0.0, 50.0}, times);
    drift = std::max(drift, tr.max_trace_drift);
    min_eig = std::min(min_eig, min_eigenvalue(tr));
  }
  {
    SystemParams p;
    p.omega0 = kTwoPi * 6.2;
    p.drive_freq = p.omega0;
    p.kappa = kTwoPi * 0.001;
    p.gamma_l = 0.02;
    p.gamma_phi = 0.2;
    p.g = kTwoPi * 0.02;
    p.epsilon = kTwoPi * 10.0;
    p.tunnel_t = kTwoPi * 1.0;
    p.drive_amp = 0.0015;
    const SpaceDescriptor space(10);
    const auto collapse = collapse_operators(p, space);
    const DensityMatrix rho0 = steady_state(jc_hamiltonian(p, space), collapse);
    const PulseFrameHamiltonian frame(p, PulseSequence{p.epsilon, 0.0, 0.6, 0.0}, space);
    std::vector<double> times;
    for (int i = 1; i <= 40; ++i) times.push_back(0.025 * i);
    const Trajectory tr =
        evolve(rho0, [&](double t) { return frame.entries_at(t); }, collapse, {0.0, 1.0}, times);
    drift = std::max(drift, tr.max_trace_drift);
    min_eig = std::min(min_eig, min_eigenvalue(tr));
  }
  checks.push_back(below("trace drift along trajectories", drift, 1e-8));
  checks.push_back(above("minimum eigenvalue along trajectories", min_eig, -1e-8));

  const double g = kTwoPi * 0.05;
  const double f = vacuum_rabi_frequency(g);
  const double f_exact = 2.0 * g / kTwoPi;
  checks.push_back(below("vacuum Rabi frequency relative error", std::abs(f - f_exact) / f_exact, 1e-6));

  checks.push_back(below("steady_state vs long-time evolve (max entry)",
                         steady_vs_evolve_error(small_damped_system(), 6, 150.0), 1e-6));

  {
    SystemParams p;
    p.omega0 = kTwoPi * 6.2;
    p.drive_freq = p.omega0 - 0.1;
    p.kappa = 0.2;
    p.gamma_l = 0.1;  // makes the qubit part of the g = 0 steady state unique
    p.drive_amp = 0.05;
    const BareCavityComparison c = bare_cavity_amplitude(p, 12);
    checks.push_back(below("driven bare cavity <a> vs analytic", std::abs(c.simulated - c.analytic), 1e-8));
  }

  {
    SystemParams p;
    p.omega0 = kTwoPi * 6.2;
    p.drive_freq = p.omega0;
    p.kappa = kTwoPi * 0.001;
    p.gamma_l = 0.02;
    p.gamma_phi = 0.2;
    p.g = kTwoPi * 0.02;
    p.epsilon = kTwoPi * 10.0;
    p.tunnel_t = kTwoPi * 1.0;
    double worst = 0.0;
    for (double target : {0.6, 3.8}) {
      const SpaceDescriptor space(default_fock_levels(target));
      const CalibrationResult cal = calibrate_drive(target, p, space);
      SystemParams q = p;
      q.drive_amp = cal.drive_amp;
      const double n = photon_number(steady_state(jc_hamiltonian(q, space), collapse_operators(q, space)));
      worst = std::max(worst, std::abs(n - target) / target);
    }
    checks.push_back(below("calibrate_drive relative photon-number error", worst, 0.01));
  }
  return checks;
}

}  // namespace dqd
