// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "dqd/config.hpp"
#include "dqd/experiments.hpp"
#include "dqd/selftest.hpp"

using namespace dqd;

namespace {

constexpr double kDispersiveRelTol = 0.05;
constexpr double kDispersiveMaxSeconds = 60.0;
constexpr double kSymmetryTolDeg = 1e-6;
constexpr double kSweepMaxSeconds = 15.0 * 60.0;
constexpr double kCalibrationRelTol = 0.01;
constexpr double kPeriodRelTol = 0.05;
constexpr double kPeakMinDeg = 1.0;
constexpr double kPeakMaxDeg = 5.0;
constexpr double kDecayRelTol = 0.10;
constexpr double kTailFraction = 0.10;
constexpr double kTailAfterUs = 0.7;
constexpr double kPulseMaxSeconds = 30.0 * 60.0;

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s %-3s %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SystemParams system_params(double omega0_ghz, double kappa_mhz, double gamma_l_us, double gamma_phi_us,
                           double g_mhz) {
  SystemConfig c;
  c.omega0_over_2pi_ghz = omega0_ghz;
  c.kappa_over_2pi_mhz = kappa_mhz;
  c.gamma_l_per_us = gamma_l_us;
  c.gamma_phi_per_us = gamma_phi_us;
  c.g_over_2pi_mhz = g_mhz;
  return c.to_params();
}

// Linearly interpolated zero crossings of y(x), strict sign changes only.
std::vector<double> zero_crossings(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (y[i] == 0.0) out.push_back(x[i]);
    else if (y[i] * y[i + 1] < 0.0) out.push_back(x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i]));
  }
  return out;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams base = system_params(6.2, 3.1, 66.7, 0.0, 50.0);
  const std::vector<double> ratios{10.0, 20.0, 50.0, 100.0};
  const auto rows = check_dispersive(base, ratios, 0.1, kDispersiveRelTol);
  const double elapsed = seconds_since(t0);
  bool all = true;
  std::string detail;
  for (const auto& r : rows) {
    all = all && r.pass;
    detail += fmt("D/g=%g rel=%.2e; ", r.delta_over_g, r.relative_error);
  }
  report("1", all && elapsed <= kDispersiveMaxSeconds, detail + fmt("%.2f s", elapsed));
}

void criterion2() {
  SweepSpec spec;
  spec.base = system_params(6.2, 3.1, 66.7, 0.0, 50.0);
  spec.eps_over_h_ghz = {-20.0, 20.0, 81};
  spec.two_t_over_h_ghz = {0.0, 20.0, 41};
  spec.probe_photon_number = 0.1;
  const auto t0 = std::chrono::steady_clock::now();
  const PhaseMap m = phase_map(spec);
  const double elapsed = seconds_since(t0);
  const auto& eps = m.x.values;
  const auto& two_t = m.y.values;

  // (a) columns bracketing 2t = 6.2 GHz along eps = 0
  const std::size_t ix0 = m.nx() / 2;
  const auto hi = std::upper_bound(two_t.begin(), two_t.end(), 6.2) - two_t.begin();
  const double below = m.at(ix0, hi - 1), above = m.at(ix0, hi);
  report("2a", eps[ix0] == 0.0 && below * above < 0.0,
         fmt("eps=0: dphi(2t=%g)=%.4f deg, dphi(2t=%g)=%.4f deg", two_t[hi - 1], below, two_t[hi], above));

  // (b) zero crossings in eps at fixed 2t against the analytic locus
  const double cell = spec.eps_over_h_ghz.step();
  bool ok_b = true;
  std::string detail_b;
  for (double tt : {2.0, 4.0, 6.0}) {
    const std::size_t iy = static_cast<std::size_t>(std::lround(tt / spec.two_t_over_h_ghz.step()));
    std::vector<double> row(m.nx());
    for (std::size_t ix = 0; ix < m.nx(); ++ix) row[ix] = m.at(ix, iy);
    const auto zc = zero_crossings(eps, row);
    const double locus = std::sqrt(6.2 * 6.2 - tt * tt);
    for (double target : {-locus, locus}) {
      double best = INFINITY;
      for (double z : zc) best = std::min(best, std::abs(z - target));
      ok_b = ok_b && best <= cell;
      detail_b += fmt("2t=%g locus=%+.3f miss=%.3f; ", tt, target, best);
    }
  }
  report("2b", ok_b, detail_b + fmt("cell=%g GHz", cell));

  // (c) mirror symmetry in eps
  double asym = 0.0;
  for (std::size_t ix = 0; ix < m.nx(); ++ix)
    for (std::size_t iy = 0; iy < m.ny(); ++iy)
      asym = std::max(asym, std::abs(m.at(ix, iy) - m.at(m.nx() - 1 - ix, iy)));
  report("2c", asym <= kSymmetryTolDeg, fmt("max |dphi(eps)-dphi(-eps)| = %.3e deg", asym));
  report("2t", elapsed <= kSweepMaxSeconds, fmt("81x41 sweep runtime %.1f s", elapsed));
}

PulseSpec pulsed_spec(double target) {
  PulseSpec spec;
  spec.base = system_params(6.2, 1.0, 20.0, 200.0, 20.0);
  spec.tp_ns = {0.0, 1.18, 60};
  spec.t_us = {0.02, 1.0, 50};
  spec.idle_epsilon = kTwoPi * 10.0;
  spec.tunnel_t = kTwoPi * 1.0;
  spec.pulse_epsilon = 0.0;
  spec.target_photon_number = target;
  return spec;
}

double criterion3() {
  const PulseSpec spec = pulsed_spec(3.8);
  const auto t0 = std::chrono::steady_clock::now();
  const PhaseMap m = pulse_phase_map(spec);
  const double elapsed = seconds_since(t0);
  const PulseMapSummary s = summarize_pulse_map(m, kTailAfterUs);

  const double n_cal = m.parameters.at("calibrated_photon_number");
  const double cal_err = std::abs(n_cal - 3.8) / 3.8;
  report("3", cal_err <= kCalibrationRelTol, fmt("calibrated n=%.5f (rel %.2e)", n_cal, cal_err));

  const double rabi_period = kTwoPi / (2.0 * spec.tunnel_t);  // ns, splitting 2t at eps = 0
  const double period_err = std::abs(s.earliest_row_fit.period - rabi_period) / rabi_period;
  report("3a", period_err <= kPeriodRelTol,
         fmt("period %.4f ns vs %.4f ns (rel %.2e)", s.earliest_row_fit.period, rabi_period, period_err));
  report("3b", s.peak_abs_deg >= kPeakMinDeg && s.peak_abs_deg <= kPeakMaxDeg,
         fmt("peak |dphi| = %.3f deg at t=%g us, tp=%g ns", s.peak_abs_deg, s.peak_t_us, s.peak_tp_ns));
  const double rate_err = std::abs(s.envelope_decay_rate_per_ns - spec.base.gamma_l) / spec.base.gamma_l;
  report("3c", rate_err <= kDecayRelTol,
         fmt("envelope rate %.5f /ns vs gamma_l %.5f /ns (rel %.2e)", s.envelope_decay_rate_per_ns,
             spec.base.gamma_l, rate_err));
  report("3d", s.tail_fraction < kTailFraction,
         fmt("max |dphi(t>%.1f us)| = %.3f deg = %.3f of peak", kTailAfterUs, s.tail_max_abs_deg, s.tail_fraction));
  report("3t", elapsed <= kPulseMaxSeconds, fmt("60x50 pulse map runtime %.1f s", elapsed));
  return s.periodicity_deviation;
}

void criterion4(double deviation_high) {
  const PhaseMap m = pulse_phase_map(pulsed_spec(0.6));
  const double deviation_low = periodicity_deviation(m);
  report("4", deviation_low > deviation_high,
         fmt("deviation(n=0.6)=%.4f, deviation(n=3.8)=%.4f", deviation_low, deviation_high));
}

void criterion5() {
  bool all = true;
  std::string detail;
  for (const auto& c : run_selftest()) {
    all = all && c.pass;
    detail += fmt("%s=%.2e%s; ", c.name.c_str(), c.value, c.pass ? "" : "(FAIL)");
  }
  report("5", all, detail);
}

template <class F>
void guarded(const char* id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded("1", criterion1);
  guarded("2", criterion2);
  double deviation_high = NAN;
  guarded("3", [&] { deviation_high = criterion3(); });
  guarded("4", [&] { criterion4(deviation_high); });
  guarded("5", criterion5);
  std::printf("%s: %d failing line(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
