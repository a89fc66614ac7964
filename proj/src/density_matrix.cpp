#include "dqd/density_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

namespace dqd {

StateCheck check_state(const Matrix& rho) {
  StateCheck c;
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

DensityMatrix::DensityMatrix(SpaceDescriptor space, Matrix entries)
    : space_(space), entries_(std::move(entries)) {
  const Eigen::Index d = space_.dimension();
  if (entries_.rows() != d || entries_.cols() != d) {
    throw DimensionError("DensityMatrix: shape does not match space");
  }
  const StateCheck c = check_state(entries_);
  if (!c.satisfies()) {
    std::ostringstream msg;
    msg << "DensityMatrix: invariants violated (hermiticity " << c.hermiticity_error
        << ", trace error " << c.trace_error << ", min eigenvalue " << c.min_eigenvalue << ")";
    throw InvalidStateError(msg.str());
  }
}

DensityMatrix DensityMatrix::basis_state(const SpaceDescriptor& space, int qubit, int fock) {
  if (qubit < 0 || qubit > 1 || fock < 0 || fock >= space.fock_levels()) {
    throw DimensionError("basis_state: index out of range");
  }
  Matrix m = Matrix::Zero(space.dimension(), space.dimension());
  const int i = space.index(qubit, fock);
  m(i, i) = 1.0;
  return {space, std::move(m)};
}

DensityMatrix DensityMatrix::pure(const SpaceDescriptor& space, const Vector& psi) {
  if (psi.size() != space.dimension()) throw DimensionError("pure: vector length mismatch");
  const double norm = psi.norm();
  if (norm == 0.0) throw PreconditionError("pure: zero vector");
  const Vector u = psi / norm;
  return {space, u * u.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(const SpaceDescriptor& space) {
  const int d = space.dimension();
  return {space, Matrix::Identity(d, d) / static_cast<double>(d)};
}

double DensityMatrix::population(int qubit, int fock) const {
  const int i = space_.index(qubit, fock);
  return entries_(i, i).real();
}

double DensityMatrix::top_fock_population() const {
  return dqd::top_fock_population(entries_, space_);
}

double DensityMatrix::min_eigenvalue() const { return check_state(entries_).min_eigenvalue; }

}  // namespace dqd
