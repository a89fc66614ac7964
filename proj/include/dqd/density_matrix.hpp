#pragma once

#include "dqd/hilbert.hpp"

namespace dqd {

struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double min_eigenvalue = -1e-8;
};

// Measured deviations of a matrix from the density-matrix invariants.
struct StateCheck {
  double hermiticity_error = 0.0;  // max |ρ - ρ†| entrywise
  double trace_error = 0.0;        // |Tr ρ - 1|
  double min_eigenvalue = 0.0;     // of the Hermitian part

  bool satisfies(const StateTolerances& tol = {}) const {
    return hermiticity_error < tol.hermiticity && trace_error < tol.trace &&
           min_eigenvalue >= tol.min_eigenvalue;
  }
};

StateCheck check_state(const Matrix& rho);

// Hermitian, unit-trace, positive-semidefinite state on a SpaceDescriptor.
// Construction validates the invariants and throws InvalidStateError on violation.
class DensityMatrix {
 public:
  DensityMatrix(SpaceDescriptor space, Matrix entries);

  static DensityMatrix basis_state(const SpaceDescriptor& space, int qubit, int fock);
  static DensityMatrix pure(const SpaceDescriptor& space, const Vector& psi);
  static DensityMatrix maximally_mixed(const SpaceDescriptor& space);

  const SpaceDescriptor& space() const noexcept { return space_; }
  const Matrix& entries() const noexcept { return entries_; }
  int dimension() const noexcept { return space_.dimension(); }

  double population(int qubit, int fock) const;
  double top_fock_population() const;
  double min_eigenvalue() const;

 private:
  SpaceDescriptor space_;
  Matrix entries_;
};

}  // namespace dqd
