#pragma once

#include <iosfwd>

namespace dqd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitAcceptance = 3;

// dqd-readout {sweep|pulse|steady|check-dispersive|selftest} --config <path> --out <dir>
//             [--lenient] [--threads <n>]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dqd
