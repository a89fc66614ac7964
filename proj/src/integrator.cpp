#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dqd/lindblad.hpp"

namespace dqd {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// dρ/dt = -i(H_eff ρ - ρ H_eff†) + Σ L ρ L†, H_eff = H - (i/2) Σ L†L.
class MasterEquation {
 public:
  MasterEquation(const HamiltonianFn& hamiltonian_at, const std::vector<OperatorMatrix>& collapse,
                 int dimension)
      : hamiltonian_at_(hamiltonian_at) {
    decay_ = Matrix::Zero(dimension, dimension);
    for (const auto& c : collapse) {
      const Matrix& L = c.entries();
      if (L.cwiseAbs().maxCoeff() == 0.0) continue;
      decay_ += L.adjoint() * L;
      jumps_.push_back(L.sparseView(Complex(1.0), 0.0));
      jumps_adj_.push_back(L.adjoint().sparseView(Complex(1.0), 0.0));
    }
    decay_ *= Complex(0.0, -0.5);
  }

  void operator()(double t, const Matrix& rho, Matrix& out) const {
    const Complex I(0.0, 1.0);
    const Matrix h_eff = hamiltonian_at_(t) + decay_;
    const Matrix hr = h_eff * rho;
    out.noalias() = -I * hr;
    out.noalias() += I * hr.adjoint();  // (H_eff ρ)† = ρ H_eff† for Hermitian ρ
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      const Matrix lr = jumps_[k] * rho;
      out.noalias() += lr * jumps_adj_[k];
    }
  }

 private:
  const HamiltonianFn& hamiltonian_at_;
  Matrix decay_;
  std::vector<SparseMatrix> jumps_;
  std::vector<SparseMatrix> jumps_adj_;
};

double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1, double atol, double rtol) {
  double acc = 0.0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
    const double r = std::abs(err.data()[i]) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const HamiltonianFn& hamiltonian_at,
                  const std::vector<OperatorMatrix>& collapse, TimeSpan span,
                  std::vector<double> sample_times, const EvolveOptions& options) {
  if (!(span.stop > span.start)) throw PreconditionError("evolve: empty time span");
  if (sample_times.empty()) sample_times.push_back(span.stop);
  std::sort(sample_times.begin(), sample_times.end());
  if (sample_times.front() < span.start || sample_times.back() > span.stop) {
    throw PreconditionError("evolve: sample times outside the span");
  }
  if (std::adjacent_find(sample_times.begin(), sample_times.end()) != sample_times.end()) {
    throw PreconditionError("evolve: duplicate sample times");
  }
  for (const auto& c : collapse) {
    if (!(c.space() == rho0.space())) throw DimensionError("evolve: collapse space mismatch");
  }

  const SpaceDescriptor space = rho0.space();
  const int d = space.dimension();
  const MasterEquation f(hamiltonian_at, collapse, d);

  Trajectory traj;
  auto record = [&](double t, const Matrix& y) {
    const double drift = std::abs(y.trace() - Complex(1.0));
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    if (drift > kTraceDriftLimit) {
      std::ostringstream msg;
      msg << "evolve: trace drift " << drift << " at t = " << t;
      throw NumericalError(msg.str());
    }
    Matrix s = 0.5 * (y + y.adjoint());
    s /= s.trace().real();
    traj.times.push_back(t);
    traj.states.emplace_back(space, std::move(s));
  };
  auto guard = [&](double t, const Matrix& y) {
    const double top = top_fock_population(y, space);
    traj.max_top_fock_population = std::max(traj.max_top_fock_population, top);
    if (top > options.truncation_guard) {
      std::ostringstream msg;
      msg << "evolve: top Fock population " << top << " exceeds " << options.truncation_guard
          << " at t = " << t << " (N = " << space.fock_levels() << ")";
      throw TruncationError(msg.str(), top);
    }
  };

  double t = span.start;
  Matrix y = rho0.entries();
  guard(t, y);
  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] == t) record(sample_times[next++], y);
  if (next == sample_times.size()) return traj;

  Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
  Matrix tmp(d, d), y_new(d, d), err(d, d);
  f(t, y, k1);

  const double max_step = options.max_step > 0.0 ? options.max_step : span.stop - span.start;
  // Initial step from the derivative scale.
  const double d0 = y.cwiseAbs().maxCoeff();
  const double d1 = k1.cwiseAbs().maxCoeff();
  double h = (d1 > 1e-300) ? 0.01 * d0 / d1 : 1e-6 * (span.stop - span.start);
  h = std::min({h, max_step, span.stop - span.start});

  long steps = 0;
  while (next < sample_times.size()) {
    if (++steps > options.max_steps) throw IntegrationError("evolve: maximum number of steps exceeded");
    const double target = sample_times[next];
    bool hits_target = false;
    double h_try = h;
    if (t + h_try >= target) {
      h_try = target - t;
      hits_target = true;
    }
    const double h_min = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h_try < h_min && !hits_target) {
      std::ostringstream msg;
      msg << "evolve: step size underflow at t = " << t << " (h = " << h_try << ")";
      throw IntegrationError(msg.str());
    }

    tmp = y + h_try * a21 * k1;
    f(t + c2 * h_try, tmp, k2);
    tmp = y + h_try * (a31 * k1 + a32 * k2);
    f(t + c3 * h_try, tmp, k3);
    tmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h_try, tmp, k4);
    tmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h_try, tmp, k5);
    tmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h_try, tmp, k6);
    y_new = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double t_new = hits_target ? target : t + h_try;
    f(t_new, y_new, k7);
    err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = error_norm(err, y, y_new, options.atol, options.rtol);
    if (!std::isfinite(en)) throw IntegrationError("evolve: non-finite error estimate");
    const double factor = (en == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);

    if (en <= 1.0) {
      ++traj.accepted_steps;
      t = t_new;
      y = 0.5 * (y_new + y_new.adjoint());
      k1 = k7;
      guard(t, y);
      if (hits_target) {
        record(target, y);
        ++next;
        // Keep the controller's proposal rather than the clipped step.
        h = std::min(std::max(h, h_try * factor), max_step);
      } else {
        h = std::min(h_try * factor, max_step);
      }
    } else {
      ++traj.rejected_steps;
      h = h_try * std::max(0.2, factor);
      if (h < h_min) {
        std::ostringstream msg;
        msg << "evolve: step size underflow at t = " << t << " (h = " << h << ")";
        throw IntegrationError(msg.str());
      }
    }
  }
  return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const OperatorMatrix& H,
                  const std::vector<OperatorMatrix>& collapse, TimeSpan span,
                  std::vector<double> sample_times, const EvolveOptions& options) {
  if (!(H.space() == rho0.space())) throw DimensionError("evolve: Hamiltonian space mismatch");
  const Matrix h = H.entries();
  const HamiltonianFn fixed = [&h](double) { return h; };
  return evolve(rho0, fixed, collapse, span, std::move(sample_times), options);
}

}  // namespace dqd
