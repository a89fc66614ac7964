#pragma once

// Parameter sweeps reproducing the spectroscopy map, the pulsed readout map and the
// dispersive-formula check.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dqd/model.hpp"

namespace dqd {

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int points = 0;

  // Throws PreconditionError unless points >= 2 and min < max.
  void validate(const std::string& name) const;
  double step() const { return (max - min) / (points - 1); }
  double at(int i) const;
  std::vector<double> values() const;
};

// Detunings in GHz: ε = 2π·value, 2t = 2π·value (rad/ns).
struct SweepSpec {
  Axis eps_over_h_ghz{-20.0, 20.0, 81};
  Axis two_t_over_h_ghz{0.0, 20.0, 41};
  SystemParams base;
  double probe_photon_number = 0.1;  // bare-cavity occupation of the weak probe
  int fock_levels = 0;               // 0: default_fock_levels(probe)
};

// Measurement time t counts from the end of the pulse and must be uniformly spaced.
struct PulseSpec {
  Axis tp_ns{0.0, 1.18, 60};
  Axis t_us{0.02, 1.0, 50};
  double idle_epsilon = 0.0;   // rad/ns
  double tunnel_t = 0.0;       // rad/ns
  double pulse_epsilon = 0.0;  // rad/ns, detuning during the pulse
  double target_photon_number = 3.8;
  SystemParams base;
  int fock_levels = 0;  // 0: default_fock_levels(target)
};

struct AxisInfo {
  std::string label;
  std::string units;
  std::vector<double> values;
};

// Grid of phase shifts (degrees), stored as values[ix * ny + iy].
struct PhaseMap {
  AxisInfo x;
  AxisInfo y;
  std::vector<double> dphi_deg;
  std::vector<double> photon_number;
  std::vector<double> top_fock_population;
  std::vector<std::string> point_errors;  // non-empty only for lenient failures
  std::map<std::string, double> parameters;
  std::string created_utc;
  std::string code_version;

  std::size_t nx() const { return x.values.size(); }
  std::size_t ny() const { return y.values.size(); }
  std::size_t index(std::size_t ix, std::size_t iy) const { return ix * ny() + iy; }
  double at(std::size_t ix, std::size_t iy) const { return dphi_deg[index(ix, iy)]; }
  double max_top_fock_population() const;
};

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  bool lenient = false;  // record NaN for failed points instead of aborting
};

// Steady-state phase shift over (ε, 2t) against the g = 0 baseline.
PhaseMap phase_map(const SweepSpec& spec, const RunOptions& options = {});

// Δφ over (t, t_p) after a rectangular detuning pulse, relative to the pre-pulse steady phase.
PhaseMap pulse_phase_map(const PulseSpec& spec, const RunOptions& options = {});

struct SinusoidFit {
  double period;
  double amplitude;  // >= 0
  double phase;
  double offset;
  double rms_residual;
};

// Least-squares fit of A cos(2π x / T + θ) + c over T, A, θ, c. Throws AnalysisError when
// the data carry no oscillation (fitted amplitude ≈ 0) or the fit fails.
SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y);

// RMS residual of the sinusoid fit to the earliest-t row, divided by the fitted amplitude.
double periodicity_deviation(const PhaseMap& map);

// Readout figures of merit of a pulse map. The reference column is the t_p maximising |Δφ| on
// the earliest-t row; its envelope is fitted as exp(-rate·t) by least squares on log|Δφ|.
struct PulseMapSummary {
  double peak_abs_deg;
  double peak_t_us;
  double peak_tp_ns;
  std::size_t reference_column;
  double reference_tp_ns;
  SinusoidFit earliest_row_fit;
  double periodicity_deviation;
  double envelope_decay_rate_per_ns;
  double tail_max_abs_deg;  // max |Δφ| over t > tail_after_us
  double tail_fraction;     // tail_max_abs_deg / peak_abs_deg
};

PulseMapSummary summarize_pulse_map(const PhaseMap& map, double tail_after_us = 0.7);

struct DispersiveCheckRow {
  double delta_over_g;
  double simulated_deg;
  double oracle_deg;
  double relative_error;
  bool pass;
};

// Steady-state Δφ vs dispersive_oracle with the qubit placed at Δ = ω₀ - Ω = r g (ε = 0).
std::vector<DispersiveCheckRow> check_dispersive(const SystemParams& base,
                                                 std::span<const double> delta_over_g,
                                                 double probe_photon_number, double tolerance,
                                                 int fock_levels = 0,
                                                 const RunOptions& options = {});

struct SteadyRecord {
  double dphi_deg;
  double phi_deg;
  double baseline_deg;
  double photon_number;
  double top_fock_population;
  double drive_amp;
  int fock_levels;
  double min_eigenvalue;
  double trace_error;
};

// Single operating point. The drive is params.drive_amp unless target_photon_number > 0, in
// which case it is calibrated against the coupled system.
SteadyRecord steady_point(const SystemParams& params, int fock_levels,
                          double target_photon_number = 0.0);

}  // namespace dqd
