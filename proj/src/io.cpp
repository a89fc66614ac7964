#include "dqd/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace dqd {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_map_csv(std::ostream& out, const PhaseMap& map, const char* header) {
  out << header << '\n';
  for (std::size_t ix = 0; ix < map.nx(); ++ix) {
    for (std::size_t iy = 0; iy < map.ny(); ++iy) {
      const std::size_t k = map.index(ix, iy);
      out << format_number(map.x.values[ix]) << ',' << format_number(map.y.values[iy]) << ','
          << format_number(map.dphi_deg[k]) << ',' << format_number(map.photon_number[k]) << ','
          << format_number(map.top_fock_population[k]) << '\n';
    }
  }
}

void write_dispersive_csv(std::ostream& out, const std::vector<DispersiveCheckRow>& rows) {
  out << kDispersiveHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.delta_over_g) << ',' << format_number(r.simulated_deg) << ','
        << format_number(r.oracle_deg) << ',' << format_number(r.relative_error) << ','
        << (r.pass ? "pass" : "fail") << '\n';
  }
}

nlohmann::json map_metadata(const PhaseMap& map) {
  nlohmann::json j;
  j["x_axis"] = {{"label", map.x.label}, {"units", map.x.units}, {"points", map.nx()}};
  j["y_axis"] = {{"label", map.y.label}, {"units", map.y.units}, {"points", map.ny()}};
  j["parameters"] = map.parameters;
  j["created_utc"] = map.created_utc;
  j["code_version"] = map.code_version;
  j["max_top_fock_pop"] = map.max_top_fock_population();
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t k = 0; k < map.point_errors.size(); ++k) {
    if (map.point_errors[k].empty()) continue;
    failures.push_back({{"x", map.x.values[k / map.ny()]},
                        {"y", map.y.values[k % map.ny()]},
                        {"error", map.point_errors[k]}});
  }
  j["failed_points"] = failures;
  return j;
}

nlohmann::json summary_json(const PulseMapSummary& s) {
  return {
      {"peak_abs_dphi_deg", s.peak_abs_deg},
      {"peak_t_us", s.peak_t_us},
      {"peak_tp_ns", s.peak_tp_ns},
      {"reference_tp_ns", s.reference_tp_ns},
      {"fitted_period_ns", s.earliest_row_fit.period},
      {"fitted_amplitude_deg", s.earliest_row_fit.amplitude},
      {"periodicity_deviation", s.periodicity_deviation},
      {"envelope_decay_rate_per_ns", s.envelope_decay_rate_per_ns},
      {"tail_max_abs_dphi_deg", s.tail_max_abs_deg},
      {"tail_fraction", s.tail_fraction},
  };
}

}  // namespace dqd
