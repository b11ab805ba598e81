#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace czband {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major. Hermiticity is checked by eigh,
/// not on construction, so the type can be filled entry by entry.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

  std::size_t dim() const noexcept { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  std::span<const cplx> entries() const noexcept { return entries_; }

  double frobenius_norm() const;
  double max_abs() const;
  /// Largest |H_ij - conj(H_ji)| divided by max_abs() (0 for the zero matrix).
  double hermiticity_defect() const;

  static HermitianMatrix identity(std::size_t dim);

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> entries_;
};

/// Eigenpairs with eigenvalues ascending. Column j of the eigenvector set is
/// stored contiguously and pairs with values[j].
struct EigenSystem {
  std::vector<double> values;
  std::vector<cplx> vectors;  // column-major, dim x dim
  std::size_t dim = 0;

  std::span<const cplx> vector(std::size_t j) const {
    return std::span<const cplx>(vectors).subspan(j * dim, dim);
  }
};

inline constexpr double kHermitianTolerance = 1e-12;

/// Full Hermitian eigendecomposition. Throws NumericalError if the input is
/// not Hermitian within kHermitianTolerance or the solver does not converge.
/// Degenerate subspaces come back in an arbitrary orthonormal basis.
EigenSystem eigh(const HermitianMatrix& h);

/// max_j ||H v_j - lambda_j v_j||_2 / ||H||_F (0 for the zero matrix).
double max_relative_residual(const HermitianMatrix& h, const EigenSystem& es);
/// max_{i,j} |<v_i|v_j> - delta_ij|
double orthonormality_defect(const EigenSystem& es);

}  // namespace czband
