#pragma once

// Run configuration read from JSON. Every key carries its unit in the name; values are
// converted to the library's rad/ns and 1/ns units only through the accessors below.

#include <filesystem>
#include <string>
#include <vector>

#include "dqd/experiments.hpp"
#include "dqd/model.hpp"
#include "json.hpp"

namespace dqd {

struct SystemConfig {
  double omega0_over_2pi_ghz = 0.0;
  double kappa_over_2pi_mhz = 0.0;
  double gamma_l_per_us = 0.0;
  double gamma_phi_per_us = 0.0;
  double g_over_2pi_mhz = 0.0;
  double drive_detuning_over_2pi_mhz = 0.0;  // ω_d - ω₀
  bool dipole_coupling = false;

  SystemParams to_params() const;  // ε, t and ξ left at zero
};

struct SweepConfig {
  Axis eps_over_h_ghz{-20.0, 20.0, 81};
  Axis two_t_over_h_ghz{0.0, 20.0, 41};
  double probe_photon_number = 0.1;
};

struct PulseConfig {
  Axis tp_ns{0.0, 1.18, 60};
  Axis t_us{0.02, 1.0, 50};
  double eps_over_h_ghz = 10.0;
  double two_t_over_h_ghz = 2.0;
  double pulse_eps_over_h_ghz = 0.0;
  std::vector<double> target_photon_number{3.8};
};

struct SteadyConfig {
  double eps_over_h_ghz = 10.0;
  double two_t_over_h_ghz = 2.0;
  double probe_photon_number = 0.1;   // bare-cavity definition of the drive
  double target_photon_number = 0.0;  // > 0: calibrate against the coupled system instead
};

struct DispersiveConfig {
  std::vector<double> delta_over_g{10.0, 20.0, 50.0, 100.0};
  double probe_photon_number = 0.1;
  double tolerance = 0.05;
};

struct RunConfig {
  SystemConfig system;
  SweepConfig sweep;
  PulseConfig pulse;
  SteadyConfig steady;
  DispersiveConfig dispersive;
  int fock_levels = 0;  // 0: per-experiment default
  bool lenient = false;
  bool deterministic = true;
  std::string output;

  SweepSpec sweep_spec() const;
  PulseSpec pulse_spec(double target_photon_number) const;
  SystemParams steady_params() const;
};

// Parameters of the spectroscopy experiment, used when no config file is given.
RunConfig default_config();

// Throws ConfigError naming the offending key (dotted path) for unknown keys, missing required
// keys, wrong types and out-of-range values. A metadata sidecar is accepted in place of a
// config: its embedded "config" object is used.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved config; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace dqd
