#include "dqd/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dqd/config.hpp"
#include "dqd/errors.hpp"
#include "dqd/experiments.hpp"
#include "dqd/io.hpp"
#include "dqd/selftest.hpp"

namespace dqd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
  std::string subcommand;
  RunConfig config;
  fs::path out_dir;
  RunOptions options;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_meta(const fs::path& path, const Invocation& inv, double wall_s, json results) {
  json meta;
  meta["version"] = DQD_VERSION;
  meta["subcommand"] = inv.subcommand;
  RunConfig resolved = inv.config;
  resolved.output = inv.out_dir.string();
  meta["config"] = to_json(resolved);
  meta["wall_clock_s"] = wall_s;
  meta["threads"] = inv.options.threads;
  meta["results"] = std::move(results);
  write_file(path, meta.dump(2) + "\n");
}

std::string csv_of(const PhaseMap& map, const char* header) {
  std::ostringstream s;
  write_map_csv(s, map, header);
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string target_tag(double n) {
  std::string s = format_number(n);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

int run_sweep(const Invocation& inv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const PhaseMap map = phase_map(inv.config.sweep_spec(), inv.options);
  write_file(inv.out_dir / "sweep.csv", csv_of(map, kSweepHeader));
  write_meta(inv.out_dir / "sweep.meta", inv, seconds_since(t0), map_metadata(map));
  out << "sweep: " << map.nx() * map.ny() << " points -> " << (inv.out_dir / "sweep.csv").string()
      << "\n";
  return kExitOk;
}

int run_pulse(const Invocation& inv, std::ostream& out) {
  const auto& targets = inv.config.pulse.target_photon_number;
  for (double n : targets) {
    const auto t0 = std::chrono::steady_clock::now();
    const PhaseMap map = pulse_phase_map(inv.config.pulse_spec(n), inv.options);
    const std::string base = targets.size() == 1 ? "pulse" : "pulse_n" + target_tag(n);
    json results = map_metadata(map);
    try {
      const PulseMapSummary s = summarize_pulse_map(map);
      results["summary"] = summary_json(s);
      out << "pulse n=" << format_number(n) << ": peak |dphi| " << format_number(s.peak_abs_deg)
          << " deg, period " << format_number(s.earliest_row_fit.period) << " ns, deviation "
          << format_number(s.periodicity_deviation) << "\n";
    } catch (const AnalysisError& e) {
      results["summary_error"] = e.what();
    }
    write_file(inv.out_dir / (base + ".csv"), csv_of(map, kPulseHeader));
    write_meta(inv.out_dir / (base + ".meta"), inv, seconds_since(t0), std::move(results));
    out << "pulse: " << map.nx() * map.ny() << " points -> " << (inv.out_dir / (base + ".csv")).string()
        << "\n";
  }
  return kExitOk;
}

int run_steady(const Invocation& inv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SteadyRecord r =
      steady_point(inv.config.steady_params(), inv.config.fock_levels, inv.config.steady.target_photon_number);
  const json record = {
      {"dphi_deg", r.dphi_deg},
      {"phi_deg", r.phi_deg},
      {"baseline_phi_deg", r.baseline_deg},
      {"photon_number", r.photon_number},
      {"top_fock_pop", r.top_fock_population},
      {"drive_amp", r.drive_amp},
      {"fock_levels", r.fock_levels},
      {"min_eigenvalue", r.min_eigenvalue},
      {"trace_error", r.trace_error},
  };
  write_file(inv.out_dir / "steady.json", record.dump(2) + "\n");
  write_meta(inv.out_dir / "steady.meta", inv, seconds_since(t0), record);
  out << "steady: dphi " << format_number(r.dphi_deg) << " deg, n " << format_number(r.photon_number)
      << "\n";
  return kExitOk;
}

int run_check_dispersive(const Invocation& inv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& d = inv.config.dispersive;
  const auto rows = check_dispersive(inv.config.system.to_params(), d.delta_over_g, d.probe_photon_number,
                                     d.tolerance, inv.config.fock_levels, inv.options);
  std::ostringstream csv;
  write_dispersive_csv(csv, rows);
  write_file(inv.out_dir / "dispersive.csv", csv.str());
  bool all = true;
  json results = json::array();
  for (const auto& r : rows) {
    all = all && r.pass;
    results.push_back({{"delta_over_g", r.delta_over_g},
                       {"simulated_dphi_deg", r.simulated_deg},
                       {"oracle_dphi_deg", r.oracle_deg},
                       {"relative_error", r.relative_error},
                       {"pass", r.pass}});
  }
  write_meta(inv.out_dir / "dispersive.meta", inv, seconds_since(t0), {{"rows", results}});
  out << csv.str();
  return all ? kExitOk : kExitAcceptance;
}

int run_selftest_cmd(const Invocation& inv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = run_selftest();
  std::ostringstream csv;
  csv << "check,value,threshold,pass\n";
  bool all = true;
  json results = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    csv << '"' << c.name << "\"," << format_number(c.value) << ',' << format_number(c.threshold) << ','
        << (c.pass ? "pass" : "fail") << '\n';
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_number(c.value)
        << (c.upper_bound ? " < " : " > ") << format_number(c.threshold) << "\n";
    results.push_back({{"check", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  }
  write_file(inv.out_dir / "selftest.csv", csv.str());
  write_meta(inv.out_dir / "selftest.meta", inv, seconds_since(t0), {{"checks", results}});
  return all ? kExitOk : kExitAcceptance;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dispersive readout simulations of a double-quantum-dot charge qubit", "dqd-readout"};
  app.set_version_flag("--version", DQD_VERSION);
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  bool lenient = false;
  unsigned threads = 0;
  app.add_option("subcommand", subcommand, "sweep | pulse | steady | check-dispersive | selftest")
      ->required()
      ->check(CLI::IsMember({"sweep", "pulse", "steady", "check-dispersive", "selftest"}));
  app.add_option("--config", config_path, "JSON run configuration or a .meta sidecar to replay");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_flag("--lenient", lenient, "record NaN for failed grid points instead of aborting");
  app.add_option("--threads", threads, "worker threads (default: available parallelism)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << DQD_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  Invocation inv;
  inv.subcommand = subcommand;
  try {
    if (!config_path.empty()) {
      inv.config = load_config(config_path);
    } else if (subcommand == "selftest" || subcommand == "check-dispersive") {
      inv.config = default_config();
    } else {
      throw ConfigError("--config", "--config is required for " + subcommand);
    }
    if (lenient) inv.config.lenient = true;
    if (!out_dir.empty()) inv.config.output = out_dir;
    if (inv.config.output.empty()) throw ConfigError("--out", "no output directory (--out or 'output')");
    inv.out_dir = inv.config.output;
    std::error_code ec;
    fs::create_directories(inv.out_dir, ec);
    if (ec || !fs::is_directory(inv.out_dir))
      throw ConfigError("--out", "cannot create output directory '" + inv.out_dir.string() + "'");
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitConfig;
  }
  inv.options.lenient = inv.config.lenient;
  inv.options.threads = threads;

  try {
    if (subcommand == "sweep") return run_sweep(inv, out);
    if (subcommand == "pulse") return run_pulse(inv, out);
    if (subcommand == "steady") return run_steady(inv, out);
    if (subcommand == "check-dispersive") return run_check_dispersive(inv, out);
    return run_selftest_cmd(inv, out);
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kExitConfig;
  } catch (const TruncationError& e) {
    err << "numerical failure: " << e.what() << " (top Fock population " << e.top_population()
        << "; raise fock_levels)\n";
    return kExitNumerical;
  } catch (const PreconditionError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace dqd
