#pragma once

// CSV serialisation of phase maps. Rows run over x outermost, y innermost.

#include <iosfwd>
#include <string>
#include <vector>

#include "dqd/experiments.hpp"
#include "json.hpp"

namespace dqd {

inline constexpr const char* kSweepHeader = "eps_over_h_ghz,two_t_over_h_ghz,dphi_deg,photon_number,top_fock_pop";
inline constexpr const char* kPulseHeader = "t_us,tp_ns,dphi_deg,photon_number,top_fock_pop";
inline constexpr const char* kDispersiveHeader =
    "delta_over_g,simulated_dphi_deg,oracle_dphi_deg,relative_error,pass";

// 12 significant digits; non-finite values as nan / inf / -inf.
std::string format_number(double v);

// Sweep maps: x = ε/h (GHz), y = 2t/h (GHz). Pulse maps: x = t (μs), y = t_p (ns).
void write_map_csv(std::ostream& out, const PhaseMap& map, const char* header);

void write_dispersive_csv(std::ostream& out, const std::vector<DispersiveCheckRow>& rows);

// Parameters, timestamps and per-point diagnostics of a map.
nlohmann::json map_metadata(const PhaseMap& map);

nlohmann::json summary_json(const PulseMapSummary& s);

}  // namespace dqd
