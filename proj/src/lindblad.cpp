#include "dqd/lindblad.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <type_traits>
#include <sstream>

namespace dqd {

Matrix lindblad_rhs(const Matrix& rho, const Matrix& H, const std::vector<Matrix>& collapse) {
  const Complex I(0.0, 1.0);
  Matrix out = -I * (H * rho - rho * H);
  for (const Matrix& L : collapse) {
    const Matrix LdL = L.adjoint() * L;
    out += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
  }
  return out;
}

Matrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H,
                    const std::vector<OperatorMatrix>& collapse) {
  if (!(rho.space() == H.space())) throw DimensionError("lindblad_rhs: space mismatch");
  std::vector<Matrix> ops;
  ops.reserve(collapse.size());
  for (const auto& c : collapse) {
    if (!(c.space() == H.space())) throw DimensionError("lindblad_rhs: collapse space mismatch");
    ops.push_back(c.entries());
  }
  return lindblad_rhs(rho.entries(), H.entries(), ops);
}

Vector vectorize(const Matrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v, int dimension) {
  if (v.size() != static_cast<Eigen::Index>(dimension) * dimension) {
    throw DimensionError("unvectorize: length is not dimension^2");
  }
  return Eigen::Map<const Matrix>(v.data(), dimension, dimension);
}

namespace {

SparseMatrix sparse_identity(int d) {
  SparseMatrix I(d, d);
  I.setIdentity();
  return I;
}

SparseMatrix to_sparse(const Matrix& m) { return m.sparseView(Complex(1.0), 0.0); }

}  // namespace

Superoperator liouvillian(const OperatorMatrix& H, const std::vector<OperatorMatrix>& collapse) {
  const int d = H.dimension();
  const Complex I(0.0, 1.0);
  const SparseMatrix Id = sparse_identity(d);
  const SparseMatrix Hs = to_sparse(H.entries());
  const SparseMatrix HsT = to_sparse(H.entries().transpose());

  // vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
  SparseMatrix L = -I * SparseMatrix(Eigen::kroneckerProduct(Id, Hs)) +
                   I * SparseMatrix(Eigen::kroneckerProduct(HsT, Id));
  for (const auto& c : collapse) {
    if (!(c.space() == H.space())) throw DimensionError("liouvillian: collapse space mismatch");
    const Matrix& Lk = c.entries();
    const Matrix LdL = Lk.adjoint() * Lk;
    L += SparseMatrix(Eigen::kroneckerProduct(to_sparse(Lk.conjugate()), to_sparse(Lk)));
    L -= 0.5 * SparseMatrix(Eigen::kroneckerProduct(Id, to_sparse(LdL)));
    L -= 0.5 * SparseMatrix(Eigen::kroneckerProduct(to_sparse(LdL.transpose()), Id));
  }
  L.makeCompressed();
  return {H.space(), std::move(L)};
}

namespace {

constexpr double kSteadyResidual = 1e-10;
constexpr double kSingularPivotRatio = 1e-8;

using SteadyLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

// min |u_jj| / max |u_jj|; the diagonal of U is stored in the supernodes of L.
double pivot_ratio(const SteadyLU& lu) {
  const auto& supernodes = lu.matrixL().m_mapL;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index j = 0; j < supernodes.cols(); ++j) {
    double pivot = 0.0;
    for (typename std::decay_t<decltype(supernodes)>::InnerIterator it(supernodes, j); it; ++it) {
      if (it.index() == j) {
        pivot = std::abs(it.value());
        break;
      }
    }
    lo = std::min(lo, pivot);
    hi = std::max(hi, pivot);
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

double residual_norm(const SparseMatrix& L, const Vector& x) {
  return (L * x).cwiseAbs().maxCoeff();
}

DensityMatrix finish_steady(const SpaceDescriptor& space, const Matrix& raw) {
  Matrix rho = 0.5 * (raw + raw.adjoint());
  rho /= rho.trace().real();
  const double top = top_fock_population(rho, space);
  if (top > kTruncationGuard) {
    std::ostringstream msg;
    msg << "steady_state: top Fock population " << top << " exceeds " << kTruncationGuard
        << " at N = " << space.fock_levels();
    throw TruncationError(msg.str(), top);
  }
  return {space, std::move(rho)};
}

// Long-time limit by repeated squaring of a short-time propagator. The limit is the
// projector onto the null space; its trace counts the independent steady states.
DensityMatrix steady_state_by_propagation(const Superoperator& L) {
  const int d = L.space.dimension();
  const Matrix dense = Matrix(L.matrix);
  const double norm = dense.cwiseAbs().colwise().sum().maxCoeff();
  if (norm == 0.0) throw ConvergenceError("steady_state: zero generator");
  Matrix P = (dense * (1.0 / norm)).exp();
  for (int k = 0; k < 200; ++k) {
    Matrix next = P * P;
    if (!next.allFinite()) throw ConvergenceError("steady_state: propagation diverged");
    const double change = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (change < 1e-13) {
      const double multiplicity = P.trace().real();
      if (std::abs(multiplicity - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "steady_state: non-unique steady state (null-space dimension " << multiplicity << ")";
        throw ConvergenceError(msg.str());
      }
      Matrix seed = Matrix::Identity(d, d) / static_cast<double>(d);
      return finish_steady(L.space, unvectorize(P * vectorize(seed), d));
    }
  }
  throw ConvergenceError("steady_state: long-time propagation did not converge");
}

}  // namespace

DensityMatrix steady_state(const Superoperator& L) {
  const int d = L.space.dimension();
  const Eigen::Index D = static_cast<Eigen::Index>(d) * d;

  // Replace the ρ(0,0) equation by Tr ρ = 1.
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(L.matrix.nonZeros()) + d);
  for (int col = 0; col < L.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(L.matrix, col); it; ++it) {
      if (it.row() != 0) triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < d; ++i) triplets.emplace_back(0, static_cast<Eigen::Index>(i) * (d + 1), 1.0);
  SparseMatrix A(D, D);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();

  Vector rhs = Vector::Zero(D);
  rhs(0) = 1.0;

  SteadyLU lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) return steady_state_by_propagation(L);
  // A degenerate null space survives the trace-row replacement as a vanishing pivot.
  const double pivots = pivot_ratio(lu);
  if (!(pivots > kSingularPivotRatio)) {
    std::ostringstream msg;
    msg << "steady_state: singular trace-constrained Liouvillian (pivot ratio " << pivots
        << "), steady state is not unique";
    throw ConvergenceError(msg.str());
  }

  Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return steady_state_by_propagation(L);

  const double res = residual_norm(L.matrix, x);
  if (!(res < kSteadyResidual)) {
    std::ostringstream msg;
    msg << "steady_state: residual " << res << " exceeds " << kSteadyResidual
        << " (ill-conditioned or non-unique steady state)";
    throw ConvergenceError(msg.str());
  }
  return finish_steady(L.space, unvectorize(x, d));
}

DensityMatrix steady_state(const OperatorMatrix& H, const std::vector<OperatorMatrix>& collapse) {
  bool dissipative = false;
  for (const auto& c : collapse) dissipative = dissipative || c.entries().cwiseAbs().maxCoeff() > 0.0;
  if (!dissipative) {
    throw PreconditionError("steady_state: needs at least one collapse operator with positive rate");
  }
  return steady_state(liouvillian(H, collapse));
}

Propagator propagator(const Superoperator& L, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("propagator: dt must be > 0");
  const Matrix scaled = Matrix(L.matrix) * Complex(dt);
  Matrix P = scaled.exp();
  if (!P.allFinite()) throw NumericalError("propagator: matrix exponential did not converge");
  return {L.space, dt, std::move(P)};
}

DensityMatrix Propagator::apply(const DensityMatrix& rho) const {
  if (!(rho.space() == space)) throw DimensionError("Propagator::apply: space mismatch");
  const int d = space.dimension();
  Matrix out = unvectorize(matrix * vectorize(rho.entries()), d);
  out = 0.5 * (out + out.adjoint());
  return {space, std::move(out)};
}

}  // namespace dqd
