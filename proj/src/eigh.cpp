#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "czband/error.hpp"
#include "czband/hermitian.hpp"

namespace czband {

double HermitianMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

double HermitianMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double HermitianMatrix::hermiticity_defect() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst / scale;
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  HermitianMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = 1.0;
  return h;
}

EigenSystem eigh(const HermitianMatrix& h) {
  const auto n = h.dim();
  if (n == 0) return {};
  if (const double defect = h.hermiticity_defect(); !(defect <= kHermitianTolerance))
    throw NumericalError("eigh: matrix of size " + std::to_string(n) +
                         " is not Hermitian (relative defect " + std::to_string(defect) + ")");

  const auto ni = static_cast<Eigen::Index>(n);
  const bool real = std::all_of(h.entries().begin(), h.entries().end(),
                                [](const cplx& z) { return z.imag() == 0.0; });
  EigenSystem es;
  es.dim = n;
  if (real) {
    Eigen::MatrixXd m(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i)
      for (Eigen::Index j = 0; j < ni; ++j)
        m(i, j) = 0.5 * (h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).real() +
                         h(static_cast<std::size_t>(j), static_cast<std::size_t>(i)).real());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
      throw NumericalError("eigh: no convergence for matrix of size " + std::to_string(n));
    es.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    es.vectors.assign(solver.eigenvectors().data(), solver.eigenvectors().data() + n * n);
    return es;
  }

  Eigen::MatrixXcd m(ni, ni);
  // Symmetrise so that round-off asymmetry does not leak into the solver.
  for (Eigen::Index i = 0; i < ni; ++i)
    for (Eigen::Index j = 0; j < ni; ++j)
      m(i, j) = 0.5 * (h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                       std::conj(h(static_cast<std::size_t>(j), static_cast<std::size_t>(i))));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigh: no convergence for matrix of size " + std::to_string(n));

  es.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  es.vectors.assign(solver.eigenvectors().data(), solver.eigenvectors().data() + n * n);
  return es;
}

double max_relative_residual(const HermitianMatrix& h, const EigenSystem& es) {
  const double norm = h.frobenius_norm();
  if (norm == 0.0) return 0.0;
  const auto n = es.dim;
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = es.vector(j);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc = -es.values[j] * v[i];
      for (std::size_t k = 0; k < n; ++k) acc += h(i, k) * v[k];
      r2 += std::norm(acc);
    }
    worst = std::max(worst, std::sqrt(r2));
  }
  return worst / norm;
}

double orthonormality_defect(const EigenSystem& es) {
  const auto n = es.dim;
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      cplx dotp = 0.0;
      const auto va = es.vector(a);
      const auto vb = es.vector(b);
      for (std::size_t i = 0; i < n; ++i) dotp += std::conj(va[i]) * vb[i];
      worst = std::max(worst, std::abs(dotp - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace czband
