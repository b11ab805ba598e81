#pragma once

#include <vector>

#include "czband/types.hpp"

namespace czband {

/// Reciprocal-lattice vector G = (2*pi/pitch) * (m, n).
struct ReciprocalVector {
  int m = 0;
  int n = 0;
  double gx = 0.0;
  double gy = 0.0;
};

/// sin(x)/x with a Taylor branch for |x| < 1e-4.
double sinc(double x);

/// Mirror phase at (x, y). The point is wrapped into the unit cell centred on
/// the origin; the square pixel of side pitch*sqrt(FF) sits at the centre.
double phase_pattern(const LatticeSpec& lattice, double x, double y);

/// Fourier amplitude phi_{m,n} of phase_pattern:
/// dphi * FF * sinc(pi*m*sqrt(FF)) * sinc(pi*n*sqrt(FF)).
double fourier_coefficient(const LatticeSpec& lattice, int m, int n);

/// All (m, n) with |m|, |n| <= halfwidth in lexicographic (m, n) order.
std::vector<ReciprocalVector> reciprocal_basis(int halfwidth, double pitch);

/// Square window centred on k: all (m, n) with |k_x + g m|, |k_y + g n| <=
/// (halfwidth + 1/2) g, g = 2 pi/pitch, in lexicographic order. Inside the
/// first zone this equals reciprocal_basis(halfwidth); on the zone boundary
/// it gains the row that makes the window symmetric under the group of k.
std::vector<ReciprocalVector> reciprocal_basis_around(Vec2 k, int halfwidth, double pitch);

/// Tabulated Fourier amplitudes of the pattern for |m|, |n| <= reach.
/// Lookups outside the table are computed on demand.
class PatternFourier {
 public:
  PatternFourier(const LatticeSpec& lattice, int reach);

  double operator()(int m, int n) const;
  int reach() const noexcept { return reach_; }
  const LatticeSpec& lattice() const noexcept { return lattice_; }

 private:
  LatticeSpec lattice_;
  int reach_;
  std::vector<double> table_;
};

}  // namespace czband
