#pragma once

// Invariant suite run by the `selftest` subcommand: each check compares a simulated quantity
// with an analytic value or a conservation law.

#include <string>
#include <vector>

#include "dqd/lindblad.hpp"
#include "dqd/model.hpp"

namespace dqd {

struct SelftestCheck {
  std::string name;
  double value;
  double threshold;
  bool upper_bound;  // pass iff value < threshold (true) or value > threshold (false)
  bool pass;
};

// Frequency (cycles/ns) of ⟨σ_z⟩ for the resonant, undamped, undriven JC model started in
// |↑, 0⟩, from interpolated zero crossings over `periods` oscillations.
double vacuum_rabi_frequency(double g, int periods = 20);

// Steady ⟨a⟩ of the driven empty cavity and its analytic value -iξ/(κ/2 + iΔ_d).
struct BareCavityComparison {
  Complex simulated;
  Complex analytic;
};
BareCavityComparison bare_cavity_amplitude(const SystemParams& params, int fock_levels);

// Largest entrywise |steady_state - evolve(ρ₀, T)|.
double steady_vs_evolve_error(const SystemParams& params, int fock_levels, double duration);

std::vector<SelftestCheck> run_selftest();

}  // namespace dqd
