#pragma once

// Operators on the truncated qubit ⊗ resonator space.
//
// Basis ordering is qubit-major: index = q * N + n, with q = 0 for |↑⟩ (excited)
// and q = 1 for |↓⟩ (ground), n the Fock number, N the number of Fock levels.

#include <Eigen/Dense>

#include <complex>

#include "dqd/errors.hpp"

namespace dqd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr int kQubitUp = 0;
inline constexpr int kQubitDown = 1;

class SpaceDescriptor {
 public:
  static constexpr int qubit_levels = 2;

  // Throws DimensionError when fock_levels < 2.
  explicit SpaceDescriptor(int fock_levels);

  int fock_levels() const noexcept { return fock_levels_; }
  int dimension() const noexcept { return qubit_levels * fock_levels_; }
  int index(int qubit, int fock) const noexcept { return qubit * fock_levels_ + fock; }

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;

 private:
  int fock_levels_;
};

class OperatorMatrix {
 public:
  // Throws DimensionError unless entries is square with the space's dimension.
  OperatorMatrix(SpaceDescriptor space, Matrix entries);

  static OperatorMatrix zero(SpaceDescriptor space);
  static OperatorMatrix identity(SpaceDescriptor space);

  const SpaceDescriptor& space() const noexcept { return space_; }
  const Matrix& entries() const noexcept { return entries_; }
  int dimension() const noexcept { return space_.dimension(); }

  OperatorMatrix adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(Complex s);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(OperatorMatrix op, Complex s) { return op *= s; }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix op) { return op *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

 private:
  SpaceDescriptor space_;
  Matrix entries_;
};

enum class QubitOp { sigma_z, sigma_plus, sigma_minus, identity };

// 2x2 single-qubit matrices in the (|↑⟩, |↓⟩) basis.
Matrix2 qubit_matrix(QubitOp kind);

// Lowering operator on N Fock levels alone: a[n-1, n] = sqrt(n).
Matrix resonator_annihilation(int fock_levels);

// a ⊗ identity-on-qubit, embedded qubit-major.
OperatorMatrix annihilation(const SpaceDescriptor& space);
OperatorMatrix number_operator(const SpaceDescriptor& space);
OperatorMatrix qubit_operator(QubitOp kind, const SpaceDescriptor& space);

// Kronecker product qubit_part ⊗ resonator_part, qubit-major.
OperatorMatrix tensor(const Matrix& qubit_part, const Matrix& resonator_part,
                      const SpaceDescriptor& space);

class DensityMatrix;

// Tr(op · rho).
Complex expectation(const OperatorMatrix& op, const DensityMatrix& rho);

// Population of the highest retained Fock level, summed over both qubit states.
double top_fock_population(const Matrix& rho, const SpaceDescriptor& space);

}  // namespace dqd
