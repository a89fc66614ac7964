#include "dqd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "dqd/errors.hpp"
#include "dqd/readout.hpp"

namespace dqd {

namespace {

using nlohmann::json;

// Tracks which keys of an object were consumed so leftovers can be rejected.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "config: '" + path_ + "' must be an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(key_path(key), "config: missing required key '" + key_path(key) + "'");
    return obj_.at(key);
  }

  double number(const std::string& key, const json& value) const {
    if (!value.is_number())
      throw ConfigError(key_path(key), "config: '" + key_path(key) + "' must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw ConfigError(key_path(key), "config: '" + key_path(key) + "' must be finite");
    return v;
  }

  double required(const std::string& key) { return number(key, at(key)); }

  void optional(const std::string& key, double& out) {
    if (has(key)) out = number(key, obj_.at(key));
  }

  void optional(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key), "config: '" + key_path(key) + "' must be a boolean");
    out = v.get<bool>();
  }

  void optional(const std::string& key, int& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number_integer())
      throw ConfigError(key_path(key), "config: '" + key_path(key) + "' must be an integer");
    out = v.get<int>();
  }

  void optional(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "config: '" + key_path(key) + "' must be a string");
    out = v.get<std::string>();
  }

  // A number or a non-empty array of numbers.
  void optional(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    std::vector<double> values;
    if (v.is_array()) {
      for (const json& e : v) values.push_back(number(key, e));
    } else {
      values.push_back(number(key, v));
    }
    if (values.empty()) throw ConfigError(key_path(key), "config: '" + key_path(key) + "' must not be empty");
    out = std::move(values);
  }

  void optional(const std::string& key, Axis& out) {
    if (!has(key)) return;
    Section axis(obj_.at(key), key_path(key));
    out.min = axis.required("min");
    out.max = axis.required("max");
    const json& points = axis.at("points");
    if (!points.is_number_integer())
      throw ConfigError(axis.key_path("points"), "config: '" + axis.key_path("points") + "' must be an integer");
    out.points = points.get<int>();
    axis.finish();
    if (out.points < 2 || !(out.min < out.max))
      throw ConfigError(key_path(key), "config: '" + key_path(key) + "' needs points >= 2 and min < max");
  }

  Section child(const std::string& key) { return Section(at(key), key_path(key)); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      (void)value;
      if (!seen_.contains(key)) throw ConfigError(key_path(key), "config: unknown key '" + key_path(key) + "'");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require_nonnegative(double v, const std::string& key) {
  if (v < 0.0) throw ConfigError(key, "config: '" + key + "' must be >= 0");
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError(key, "config: '" + key + "' must be > 0");
}

json axis_json(const Axis& a) { return {{"min", a.min}, {"max", a.max}, {"points", a.points}}; }

}  // namespace

SystemParams SystemConfig::to_params() const {
  SystemParams p;
  p.omega0 = kTwoPi * omega0_over_2pi_ghz;
  p.kappa = kTwoPi * kappa_over_2pi_mhz * 1e-3;
  p.gamma_l = gamma_l_per_us * 1e-3;
  p.gamma_phi = gamma_phi_per_us * 1e-3;
  p.g = kTwoPi * g_over_2pi_mhz * 1e-3;
  p.drive_freq = p.omega0 + kTwoPi * drive_detuning_over_2pi_mhz * 1e-3;
  p.dipole_coupling = dipole_coupling;
  return p;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.eps_over_h_ghz = sweep.eps_over_h_ghz;
  s.two_t_over_h_ghz = sweep.two_t_over_h_ghz;
  s.base = system.to_params();
  s.probe_photon_number = sweep.probe_photon_number;
  s.fock_levels = fock_levels;
  return s;
}

PulseSpec RunConfig::pulse_spec(double target_photon_number) const {
  PulseSpec s;
  s.tp_ns = pulse.tp_ns;
  s.t_us = pulse.t_us;
  s.idle_epsilon = kTwoPi * pulse.eps_over_h_ghz;
  s.tunnel_t = 0.5 * kTwoPi * pulse.two_t_over_h_ghz;
  s.pulse_epsilon = kTwoPi * pulse.pulse_eps_over_h_ghz;
  s.target_photon_number = target_photon_number;
  s.base = system.to_params();
  s.fock_levels = fock_levels;
  return s;
}

SystemParams RunConfig::steady_params() const {
  SystemParams p = system.to_params();
  p.epsilon = kTwoPi * steady.eps_over_h_ghz;
  p.tunnel_t = 0.5 * kTwoPi * steady.two_t_over_h_ghz;
  p.drive_amp = bare_cavity_drive(steady.probe_photon_number, p);
  return p;
}

RunConfig default_config() {
  RunConfig c;
  c.system.omega0_over_2pi_ghz = 6.2;
  c.system.kappa_over_2pi_mhz = 3.1;
  c.system.gamma_l_per_us = 66.7;
  c.system.gamma_phi_per_us = 0.0;
  c.system.g_over_2pi_mhz = 50.0;
  return c;
}

RunConfig parse_config(const nlohmann::json& input) {
  const json* doc = &input;
  // Metadata sidecars carry the resolved config under "config".
  if (input.is_object() && input.contains("config") && input.contains("version")) doc = &input.at("config");

  RunConfig c;
  Section root(*doc, "");
  {
    Section s = root.child("system");
    c.system.omega0_over_2pi_ghz = s.required("omega0_over_2pi_ghz");
    c.system.kappa_over_2pi_mhz = s.required("kappa_over_2pi_mhz");
    c.system.gamma_l_per_us = s.required("gamma_l_per_us");
    c.system.gamma_phi_per_us = s.required("gamma_phi_per_us");
    c.system.g_over_2pi_mhz = s.required("g_over_2pi_mhz");
    s.optional("drive_detuning_over_2pi_mhz", c.system.drive_detuning_over_2pi_mhz);
    s.optional("dipole_coupling", c.system.dipole_coupling);
    s.finish();
    require_positive(c.system.omega0_over_2pi_ghz, "system.omega0_over_2pi_ghz");
    require_nonnegative(c.system.kappa_over_2pi_mhz, "system.kappa_over_2pi_mhz");
    require_nonnegative(c.system.gamma_l_per_us, "system.gamma_l_per_us");
    require_nonnegative(c.system.gamma_phi_per_us, "system.gamma_phi_per_us");
    require_nonnegative(c.system.g_over_2pi_mhz, "system.g_over_2pi_mhz");
  }
  if (root.has("sweep")) {
    Section s = root.child("sweep");
    s.optional("eps_over_h_ghz", c.sweep.eps_over_h_ghz);
    s.optional("two_t_over_h_ghz", c.sweep.two_t_over_h_ghz);
    s.optional("probe_photon_number", c.sweep.probe_photon_number);
    s.finish();
    require_nonnegative(c.sweep.two_t_over_h_ghz.min, "sweep.two_t_over_h_ghz.min");
    require_positive(c.sweep.probe_photon_number, "sweep.probe_photon_number");
  }
  if (root.has("pulse")) {
    Section s = root.child("pulse");
    s.optional("tp_ns", c.pulse.tp_ns);
    s.optional("t_us", c.pulse.t_us);
    s.optional("eps_over_h_ghz", c.pulse.eps_over_h_ghz);
    s.optional("two_t_over_h_ghz", c.pulse.two_t_over_h_ghz);
    s.optional("pulse_eps_over_h_ghz", c.pulse.pulse_eps_over_h_ghz);
    s.optional("target_photon_number", c.pulse.target_photon_number);
    s.finish();
    require_nonnegative(c.pulse.tp_ns.min, "pulse.tp_ns.min");
    require_nonnegative(c.pulse.t_us.min, "pulse.t_us.min");
    require_positive(c.pulse.two_t_over_h_ghz, "pulse.two_t_over_h_ghz");
    for (double n : c.pulse.target_photon_number) require_positive(n, "pulse.target_photon_number");
  }
  if (root.has("steady")) {
    Section s = root.child("steady");
    s.optional("eps_over_h_ghz", c.steady.eps_over_h_ghz);
    s.optional("two_t_over_h_ghz", c.steady.two_t_over_h_ghz);
    s.optional("probe_photon_number", c.steady.probe_photon_number);
    s.optional("target_photon_number", c.steady.target_photon_number);
    s.finish();
    require_nonnegative(c.steady.two_t_over_h_ghz, "steady.two_t_over_h_ghz");
    require_positive(c.steady.probe_photon_number, "steady.probe_photon_number");
    require_nonnegative(c.steady.target_photon_number, "steady.target_photon_number");
  }
  if (root.has("dispersive")) {
    Section s = root.child("dispersive");
    s.optional("delta_over_g", c.dispersive.delta_over_g);
    s.optional("probe_photon_number", c.dispersive.probe_photon_number);
    s.optional("tolerance", c.dispersive.tolerance);
    s.finish();
    for (double r : c.dispersive.delta_over_g) require_positive(r, "dispersive.delta_over_g");
    require_positive(c.dispersive.probe_photon_number, "dispersive.probe_photon_number");
    require_positive(c.dispersive.tolerance, "dispersive.tolerance");
  }
  root.optional("fock_levels", c.fock_levels);
  root.optional("lenient", c.lenient);
  root.optional("deterministic", c.deterministic);
  root.optional("output", c.output);
  root.finish();
  if (c.fock_levels != 0 && c.fock_levels < 2)
    throw ConfigError("fock_levels", "config: 'fock_levels' must be 0 (automatic) or >= 2");
  if (!c.deterministic)
    throw ConfigError("deterministic", "config: 'deterministic' can only be true, all computations are deterministic");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "config: cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("config: parse error: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["system"] = {
      {"omega0_over_2pi_ghz", c.system.omega0_over_2pi_ghz},
      {"kappa_over_2pi_mhz", c.system.kappa_over_2pi_mhz},
      {"gamma_l_per_us", c.system.gamma_l_per_us},
      {"gamma_phi_per_us", c.system.gamma_phi_per_us},
      {"g_over_2pi_mhz", c.system.g_over_2pi_mhz},
      {"drive_detuning_over_2pi_mhz", c.system.drive_detuning_over_2pi_mhz},
      {"dipole_coupling", c.system.dipole_coupling},
  };
  j["sweep"] = {
      {"eps_over_h_ghz", axis_json(c.sweep.eps_over_h_ghz)},
      {"two_t_over_h_ghz", axis_json(c.sweep.two_t_over_h_ghz)},
      {"probe_photon_number", c.sweep.probe_photon_number},
  };
  j["pulse"] = {
      {"tp_ns", axis_json(c.pulse.tp_ns)},
      {"t_us", axis_json(c.pulse.t_us)},
      {"eps_over_h_ghz", c.pulse.eps_over_h_ghz},
      {"two_t_over_h_ghz", c.pulse.two_t_over_h_ghz},
      {"pulse_eps_over_h_ghz", c.pulse.pulse_eps_over_h_ghz},
      {"target_photon_number", c.pulse.target_photon_number},
  };
  j["steady"] = {
      {"eps_over_h_ghz", c.steady.eps_over_h_ghz},
      {"two_t_over_h_ghz", c.steady.two_t_over_h_ghz},
      {"probe_photon_number", c.steady.probe_photon_number},
      {"target_photon_number", c.steady.target_photon_number},
  };
  j["dispersive"] = {
      {"delta_over_g", c.dispersive.delta_over_g},
      {"probe_photon_number", c.dispersive.probe_photon_number},
      {"tolerance", c.dispersive.tolerance},
  };
  j["fock_levels"] = c.fock_levels;
  j["lenient"] = c.lenient;
  j["deterministic"] = c.deterministic;
  j["output"] = c.output;
  return j;
}

}  // namespace dqd
