#include "dqd/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>

#include "dqd/errors.hpp"
#include "dqd/lindblad.hpp"
#include "dqd/readout.hpp"
#include "parallel.hpp"

namespace dqd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void stamp(PhaseMap& map) {
  map.created_utc = utc_now();
  map.code_version = DQD_VERSION;
}

void allocate(PhaseMap& map) {
  const std::size_t n = map.nx() * map.ny();
  map.dphi_deg.assign(n, kNaN);
  map.photon_number.assign(n, kNaN);
  map.top_fock_population.assign(n, kNaN);
  map.point_errors.assign(n, {});
}

void record_params(PhaseMap& map, const SystemParams& p) {
  map.parameters["omega0"] = p.omega0;
  map.parameters["kappa"] = p.kappa;
  map.parameters["gamma_l"] = p.gamma_l;
  map.parameters["gamma_phi"] = p.gamma_phi;
  map.parameters["g"] = p.g;
  map.parameters["drive_freq"] = p.drive_freq;
  map.parameters["drive_amp"] = p.drive_amp;
  map.parameters["dipole_coupling"] = p.dipole_coupling ? 1.0 : 0.0;
}

// Hermitian part of an unvectorised propagated state.
DensityMatrix to_state(const Vector& v, const SpaceDescriptor& space) {
  const Matrix m = unvectorize(v, space.dimension());
  return DensityMatrix(space, 0.5 * (m + m.adjoint()));
}

struct LinearFit {
  Eigen::Vector3d coeffs;  // cos, sin, offset
  double rss;
};

LinearFit fit_at_period(std::span<const double> x, std::span<const double> y, double period) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  const double w = kTwoPi / period;
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = std::cos(w * x[i]);
    A(i, 1) = std::sin(w * x[i]);
    A(i, 2) = 1.0;
    b(i) = y[i];
  }
  LinearFit fit;
  fit.coeffs = A.colPivHouseholderQr().solve(b);
  fit.rss = (A * fit.coeffs - b).squaredNorm();
  return fit;
}

}  // namespace

void Axis::validate(const std::string& name) const {
  if (points < 2) throw PreconditionError(name + ": at least 2 points required");
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
    throw PreconditionError(name + ": require finite min < max");
}

double Axis::at(int i) const {
  if (i == points - 1) return max;
  return min + i * step();
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 0; i < points; ++i) v[i] = at(i);
  return v;
}

double PhaseMap::max_top_fock_population() const {
  double m = 0.0;
  for (double p : top_fock_population)
    if (std::isfinite(p)) m = std::max(m, p);
  return m;
}

PhaseMap phase_map(const SweepSpec& spec, const RunOptions& options) {
  spec.eps_over_h_ghz.validate("eps axis");
  spec.two_t_over_h_ghz.validate("two_t axis");
  if (!(spec.probe_photon_number > 0.0))
    throw PreconditionError("probe_photon_number must be > 0");
  if (spec.two_t_over_h_ghz.min < 0.0) throw PreconditionError("two_t axis must be >= 0");

  SystemParams base = spec.base;
  base.drive_amp = bare_cavity_drive(spec.probe_photon_number, base);
  base.validate();
  const int levels =
      spec.fock_levels > 0 ? spec.fock_levels : default_fock_levels(spec.probe_photon_number);
  const SpaceDescriptor space(levels);
  const double phi0 = baseline_phase(base, space);

  PhaseMap map;
  map.x = {"eps_over_h", "GHz", spec.eps_over_h_ghz.values()};
  map.y = {"two_t_over_h", "GHz", spec.two_t_over_h_ghz.values()};
  allocate(map);
  record_params(map, base);
  map.parameters["fock_levels"] = levels;
  map.parameters["probe_photon_number"] = spec.probe_photon_number;
  map.parameters["baseline_phase_rad"] = phi0;

  detail::parallel_for(map.nx() * map.ny(), options.threads, [&](std::size_t k) {
    const std::size_t ix = k / map.ny();
    const std::size_t iy = k % map.ny();
    SystemParams p = base;
    p.epsilon = kTwoPi * map.x.values[ix];
    p.tunnel_t = 0.5 * kTwoPi * map.y.values[iy];
    try {
      const DensityMatrix rho = steady_state(jc_hamiltonian(p, space), collapse_operators(p, space));
      map.dphi_deg[k] = radians_to_degrees(phase_shift(rho, phi0));
      map.photon_number[k] = photon_number(rho);
      map.top_fock_population[k] = rho.top_fock_population();
    } catch (const Error& e) {
      if (!options.lenient) throw;
      map.point_errors[k] = e.what();
    }
  });
  stamp(map);
  return map;
}

PhaseMap pulse_phase_map(const PulseSpec& spec, const RunOptions& options) {
  spec.tp_ns.validate("tp axis");
  spec.t_us.validate("t axis");
  if (spec.tp_ns.min < 0.0) throw PreconditionError("tp axis must be >= 0");
  if (spec.t_us.min < 0.0) throw PreconditionError("t axis must be >= 0");

  SystemParams p = spec.base;
  p.epsilon = spec.idle_epsilon;
  p.tunnel_t = spec.tunnel_t;
  const int levels = spec.fock_levels > 0 ? spec.fock_levels
                                          : default_fock_levels(spec.target_photon_number);
  const SpaceDescriptor space(levels);
  const CalibrationResult cal = calibrate_drive(spec.target_photon_number, p, space);
  p.drive_amp = cal.drive_amp;
  p.validate();

  const OperatorMatrix H = jc_hamiltonian(p, space);
  const auto collapse = collapse_operators(p, space);
  const DensityMatrix rho0 = steady_state(H, collapse);
  const double phi0 = phase(rho0);
  const Superoperator L = liouvillian(H, collapse);

  const double dt = 1e3 * spec.t_us.step();
  const double t_first = 1e3 * spec.t_us.min;
  const Propagator step = propagator(L, dt);
  const bool first_is_step = std::abs(t_first - dt) <= 1e-12 * dt;
  const Propagator first = first_is_step || t_first == 0.0 ? step : propagator(L, t_first);

  PhaseMap map;
  map.x = {"t", "us", spec.t_us.values()};
  map.y = {"tp", "ns", spec.tp_ns.values()};
  allocate(map);
  record_params(map, p);
  map.parameters["epsilon"] = p.epsilon;
  map.parameters["tunnel_t"] = p.tunnel_t;
  map.parameters["pulse_epsilon"] = spec.pulse_epsilon;
  map.parameters["fock_levels"] = levels;
  map.parameters["target_photon_number"] = spec.target_photon_number;
  map.parameters["calibrated_photon_number"] = cal.photon_number;
  map.parameters["calibration_iterations"] = cal.iterations;
  map.parameters["pre_pulse_phase_rad"] = phi0;

  const std::size_t nx = map.nx();
  detail::parallel_for(map.ny(), options.threads, [&](std::size_t iy) {
    const double tp = map.y.values[iy];
    try {
      DensityMatrix rho = rho0;
      if (tp > 0.0) {
        const PulseSequence seq{p.epsilon, 0.0, tp, spec.pulse_epsilon};
        const PulseFrameHamiltonian frame(p, seq, space);
        const Trajectory tr =
            evolve(rho0, [&](double t) { return frame.entries_at(t); }, collapse, {0.0, tp}, {tp});
        rho = tr.states.back();
      }
      Vector v = vectorize(rho.entries());
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const std::size_t k = map.index(ix, iy);
        try {
          if (ix == 0) {
            if (t_first > 0.0) v = first.apply(v);
          } else {
            v = step.apply(v);
          }
          const DensityMatrix r = to_state(v, space);
          const double top = r.top_fock_population();
          map.top_fock_population[k] = top;
          map.photon_number[k] = photon_number(r);
          if (top > kTruncationGuard)
            throw TruncationError("pulse_phase_map: top Fock level population exceeds guard", top);
          map.dphi_deg[k] = radians_to_degrees(phase_shift(r, phi0));
        } catch (const Error& e) {
          if (!options.lenient) throw;
          map.point_errors[k] = e.what();
        }
      }
    } catch (const Error& e) {
      if (!options.lenient) throw;
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const std::size_t k = map.index(ix, iy);
        if (map.point_errors[k].empty() && std::isnan(map.dphi_deg[k])) map.point_errors[k] = e.what();
      }
    }
  });
  stamp(map);
  return map;
}

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit_sinusoid: x and y differ in length");
  if (x.size() < 5) throw AnalysisError("fit_sinusoid: at least 5 points required");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw AnalysisError("fit_sinusoid: non-finite data");
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const double span = *xmax_it - *xmin_it;
  if (!(span > 0.0)) throw AnalysisError("fit_sinusoid: degenerate abscissa");
  double min_dx = span;
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] > sorted[i - 1]) min_dx = std::min(min_dx, sorted[i] - sorted[i - 1]);

  // Scan in frequency from half a cycle over the span up to the Nyquist limit, then refine the
  // best bracket by golden section.
  const double f_lo = 0.5 / span;
  const double f_hi = 0.5 / min_dx;
  const int scan = 4000;
  const double df = (f_hi - f_lo) / scan;
  double best_f = f_lo;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) {
    const double f = f_lo + i * df;
    const double rss = fit_at_period(x, y, 1.0 / f).rss;
    if (rss < best_rss) {
      best_rss = rss;
      best_f = f;
    }
  }
  double a = std::max(f_lo, best_f - df);
  double b = std::min(f_hi, best_f + df);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = fit_at_period(x, y, 1.0 / c).rss;
  double fd = fit_at_period(x, y, 1.0 / d).rss;
  for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = fit_at_period(x, y, 1.0 / c).rss;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = fit_at_period(x, y, 1.0 / d).rss;
    }
  }
  double f = 0.5 * (a + b);
  LinearFit fit = fit_at_period(x, y, 1.0 / f);
  if (best_rss < fit.rss) {
    f = best_f;
    fit = fit_at_period(x, y, 1.0 / f);
  }

  const double amplitude = std::hypot(fit.coeffs(0), fit.coeffs(1));
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  if (!std::isfinite(amplitude) || amplitude <= 1e-9 * std::max(scale, 1e-300) ||
      amplitude < 1e-300)
    throw AnalysisError("fit_sinusoid: fitted amplitude is zero, data carry no oscillation");
  // A cos(wx + θ) = A cosθ cos(wx) - A sinθ sin(wx)
  SinusoidFit out;
  out.period = 1.0 / f;
  out.amplitude = amplitude;
  out.phase = std::atan2(-fit.coeffs(1), fit.coeffs(0));
  out.offset = fit.coeffs(2);
  out.rms_residual = std::sqrt(fit.rss / static_cast<double>(x.size()));
  return out;
}

double periodicity_deviation(const PhaseMap& map) {
  if (map.nx() == 0 || map.ny() == 0) throw AnalysisError("periodicity_deviation: empty map");
  std::vector<double> row(map.ny());
  for (std::size_t iy = 0; iy < map.ny(); ++iy) row[iy] = map.at(0, iy);
  const SinusoidFit fit = fit_sinusoid(map.y.values, row);
  return fit.rms_residual / fit.amplitude;
}

PulseMapSummary summarize_pulse_map(const PhaseMap& map, double tail_after_us) {
  if (map.nx() < 2 || map.ny() < 2) throw AnalysisError("summarize_pulse_map: map too small");
  for (double v : map.dphi_deg)
    if (!std::isfinite(v)) throw AnalysisError("summarize_pulse_map: map has non-finite values");
  PulseMapSummary s{};
  s.peak_abs_deg = -1.0;
  for (std::size_t ix = 0; ix < map.nx(); ++ix) {
    for (std::size_t iy = 0; iy < map.ny(); ++iy) {
      if (std::abs(map.at(ix, iy)) > s.peak_abs_deg) {
        s.peak_abs_deg = std::abs(map.at(ix, iy));
        s.peak_t_us = map.x.values[ix];
        s.peak_tp_ns = map.y.values[iy];
      }
    }
  }
  double best = -1.0;
  for (std::size_t iy = 0; iy < map.ny(); ++iy) {
    if (std::abs(map.at(0, iy)) > best) {
      best = std::abs(map.at(0, iy));
      s.reference_column = iy;
    }
  }
  s.reference_tp_ns = map.y.values[s.reference_column];

  std::vector<double> row(map.ny());
  for (std::size_t iy = 0; iy < map.ny(); ++iy) row[iy] = map.at(0, iy);
  s.earliest_row_fit = fit_sinusoid(map.y.values, row);
  s.periodicity_deviation = s.earliest_row_fit.rms_residual / s.earliest_row_fit.amplitude;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t ix = 0; ix < map.nx(); ++ix) {
    const double v = std::abs(map.at(ix, s.reference_column));
    if (!(v > 0.0)) continue;
    const double t = 1e3 * map.x.values[ix];
    const double y = std::log(v);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    n += 1.0;
  }
  if (n < 2.0) throw AnalysisError("summarize_pulse_map: envelope has fewer than 2 nonzero points");
  s.envelope_decay_rate_per_ns = -(n * sxy - sx * sy) / (n * sxx - sx * sx);

  s.tail_max_abs_deg = 0.0;
  for (std::size_t ix = 0; ix < map.nx(); ++ix) {
    if (!(map.x.values[ix] > tail_after_us)) continue;
    for (std::size_t iy = 0; iy < map.ny(); ++iy)
      s.tail_max_abs_deg = std::max(s.tail_max_abs_deg, std::abs(map.at(ix, iy)));
  }
  s.tail_fraction = s.peak_abs_deg > 0.0 ? s.tail_max_abs_deg / s.peak_abs_deg : 0.0;
  return s;
}

std::vector<DispersiveCheckRow> check_dispersive(const SystemParams& base,
                                                 std::span<const double> delta_over_g,
                                                 double probe_photon_number, double tolerance,
                                                 int fock_levels, const RunOptions& options) {
  if (!(probe_photon_number > 0.0)) throw PreconditionError("probe_photon_number must be > 0");
  if (!(base.g > 0.0)) throw PreconditionError("check_dispersive: g must be > 0");
  SystemParams p0 = base;
  p0.drive_amp = bare_cavity_drive(probe_photon_number, p0);
  p0.epsilon = 0.0;
  const int levels = fock_levels > 0 ? fock_levels : default_fock_levels(probe_photon_number);
  const SpaceDescriptor space(levels);
  const double phi0 = baseline_phase(p0, space);

  std::vector<DispersiveCheckRow> rows(delta_over_g.size());
  detail::parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    const double r = delta_over_g[i];
    SystemParams p = p0;
    const double Omega = p.omega0 - r * p.g;
    if (!(Omega > 0.0)) throw PreconditionError("check_dispersive: Δ/g places Ω <= 0");
    p.tunnel_t = 0.5 * Omega;
    const DensityMatrix rho = steady_state(jc_hamiltonian(p, space), collapse_operators(p, space));
    DispersiveCheckRow row;
    row.delta_over_g = r;
    row.simulated_deg = radians_to_degrees(phase_shift(rho, phi0));
    row.oracle_deg =
        radians_to_degrees(dispersive_oracle(effective_coupling(p), p.kappa, readout_detuning(p)));
    row.relative_error = std::abs(row.simulated_deg - row.oracle_deg) / std::abs(row.oracle_deg);
    row.pass = row.relative_error <= tolerance;
    rows[i] = row;
  });
  return rows;
}

SteadyRecord steady_point(const SystemParams& params, int fock_levels,
                          double target_photon_number) {
  SystemParams p = params;
  const int levels = fock_levels > 0
                         ? fock_levels
                         : default_fock_levels(target_photon_number > 0.0 ? target_photon_number
                                                                          : 0.1);
  const SpaceDescriptor space(levels);
  if (target_photon_number > 0.0) p.drive_amp = calibrate_drive(target_photon_number, p, space).drive_amp;
  p.validate();
  const DensityMatrix rho = steady_state(jc_hamiltonian(p, space), collapse_operators(p, space));
  const double phi0 = baseline_phase(p, space);
  const double phi = phase(rho);
  const StateCheck check = check_state(rho.entries());
  SteadyRecord rec;
  rec.dphi_deg = radians_to_degrees(wrap_phase(phi - phi0));
  rec.phi_deg = radians_to_degrees(phi);
  rec.baseline_deg = radians_to_degrees(phi0);
  rec.photon_number = photon_number(rho);
  rec.top_fock_population = rho.top_fock_population();
  rec.drive_amp = p.drive_amp;
  rec.fock_levels = levels;
  rec.min_eigenvalue = check.min_eigenvalue;
  rec.trace_error = check.trace_error;
  return rec;
}

}  // namespace dqd
