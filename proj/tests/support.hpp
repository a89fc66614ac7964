#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "dqd/density_matrix.hpp"
#include "dqd/hilbert.hpp"

namespace dqd::test {

inline Matrix random_matrix(std::mt19937& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937& rng, int d) {
  const Matrix m = random_matrix(rng, d, d);
  return 0.5 * (m + m.adjoint());
}

// G G† / Tr with G of the requested rank (full rank when rank <= 0).
inline DensityMatrix random_state(std::mt19937& rng, const SpaceDescriptor& space, int rank = 0) {
  const int d = space.dimension();
  const Matrix g = random_matrix(rng, d, rank > 0 ? rank : d);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {space, 0.5 * (rho + rho.adjoint())};
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Empty directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dqd_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace dqd::test
