#include "dqd/hilbert.hpp"

#include <cmath>
#include <string>

#include "dqd/density_matrix.hpp"

namespace dqd {

SpaceDescriptor::SpaceDescriptor(int fock_levels) : fock_levels_(fock_levels) {
  if (fock_levels < 2) {
    throw DimensionError("SpaceDescriptor: fock_levels must be >= 2, got " +
                         std::to_string(fock_levels));
  }
}

OperatorMatrix::OperatorMatrix(SpaceDescriptor space, Matrix entries)
    : space_(space), entries_(std::move(entries)) {
  const Eigen::Index d = space_.dimension();
  if (entries_.rows() != d || entries_.cols() != d) {
    throw DimensionError("OperatorMatrix: expected " + std::to_string(d) + "x" +
                         std::to_string(d) + ", got " + std::to_string(entries_.rows()) +
                         "x" + std::to_string(entries_.cols()));
  }
}

OperatorMatrix OperatorMatrix::zero(SpaceDescriptor space) {
  return {space, Matrix::Zero(space.dimension(), space.dimension())};
}

OperatorMatrix OperatorMatrix::identity(SpaceDescriptor space) {
  return {space, Matrix::Identity(space.dimension(), space.dimension())};
}

OperatorMatrix OperatorMatrix::adjoint() const { return {space_, entries_.adjoint()}; }

bool OperatorMatrix::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() < tol;
}

namespace {
void require_same_space(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
  if (!(a.space() == b.space())) throw DimensionError(std::string(what) + ": space mismatch");
}
}  // namespace

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  require_same_space(*this, rhs, "operator+");
  entries_ += rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  require_same_space(*this, rhs, "operator-");
  entries_ -= rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  require_same_space(lhs, rhs, "operator*");
  return {lhs.space(), lhs.entries() * rhs.entries()};
}

Matrix2 qubit_matrix(QubitOp kind) {
  Matrix2 m = Matrix2::Zero();
  switch (kind) {
    case QubitOp::sigma_z:
      m(kQubitUp, kQubitUp) = 1.0;
      m(kQubitDown, kQubitDown) = -1.0;
      break;
    case QubitOp::sigma_plus:  // |↑⟩⟨↓|
      m(kQubitUp, kQubitDown) = 1.0;
      break;
    case QubitOp::sigma_minus:  // |↓⟩⟨↑|
      m(kQubitDown, kQubitUp) = 1.0;
      break;
    case QubitOp::identity:
      m.setIdentity();
      break;
  }
  return m;
}

Matrix resonator_annihilation(int fock_levels) {
  Matrix a = Matrix::Zero(fock_levels, fock_levels);
  for (int n = 1; n < fock_levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorMatrix tensor(const Matrix& qubit_part, const Matrix& resonator_part,
                      const SpaceDescriptor& space) {
  const int N = space.fock_levels();
  if (qubit_part.rows() != 2 || qubit_part.cols() != 2 || resonator_part.rows() != N ||
      resonator_part.cols() != N) {
    throw DimensionError("tensor: operand shapes do not match the space (2 x " +
                         std::to_string(N) + ")");
  }
  Matrix out(space.dimension(), space.dimension());
  for (int q = 0; q < 2; ++q) {
    for (int p = 0; p < 2; ++p) {
      out.block(q * N, p * N, N, N) = qubit_part(q, p) * resonator_part;
    }
  }
  return {space, std::move(out)};
}

OperatorMatrix annihilation(const SpaceDescriptor& space) {
  return tensor(Matrix2::Identity(), resonator_annihilation(space.fock_levels()), space);
}

OperatorMatrix number_operator(const SpaceDescriptor& space) {
  const Matrix a = resonator_annihilation(space.fock_levels());
  return tensor(Matrix2::Identity(), a.adjoint() * a, space);
}

OperatorMatrix qubit_operator(QubitOp kind, const SpaceDescriptor& space) {
  const int N = space.fock_levels();
  return tensor(qubit_matrix(kind), Matrix::Identity(N, N), space);
}

Complex expectation(const OperatorMatrix& op, const DensityMatrix& rho) {
  if (!(op.space() == rho.space())) throw DimensionError("expectation: space mismatch");
  // Tr(AB) = sum_ij A_ij B_ji
  return op.entries().cwiseProduct(rho.entries().transpose()).sum();
}

double top_fock_population(const Matrix& rho, const SpaceDescriptor& space) {
  const int top = space.fock_levels() - 1;
  return rho(space.index(kQubitUp, top), space.index(kQubitUp, top)).real() +
         rho(space.index(kQubitDown, top), space.index(kQubitDown, top)).real();
}

}  // namespace dqd
