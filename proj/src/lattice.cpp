#include "czband/lattice.hpp"

#include <cmath>
#include <utility>

#include "czband/constants.hpp"

namespace czband {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

namespace {

// Maps a coordinate into [-pitch/2, pitch/2).
double wrap(double u, double pitch) { return u - pitch * std::floor(u / pitch + 0.5); }

}  // namespace

double phase_pattern(const LatticeSpec& lattice, double x, double y) {
  const double half_side = 0.5 * lattice.pitch * std::sqrt(lattice.fill_factor);
  const double xw = wrap(x, lattice.pitch);
  const double yw = wrap(y, lattice.pitch);
  return (std::abs(xw) < half_side && std::abs(yw) < half_side) ? lattice.dphi : 0.0;
}

double fourier_coefficient(const LatticeSpec& lattice, int m, int n) {
  const double a = constants::pi * std::sqrt(lattice.fill_factor);
  return lattice.dphi * lattice.fill_factor * sinc(a * m) * sinc(a * n);
}

std::vector<ReciprocalVector> reciprocal_basis(int halfwidth, double pitch) {
  const double g = 2.0 * constants::pi / pitch;
  std::vector<ReciprocalVector> basis;
  basis.reserve(static_cast<std::size_t>((2 * halfwidth + 1) * (2 * halfwidth + 1)));
  for (int m = -halfwidth; m <= halfwidth; ++m)
    for (int n = -halfwidth; n <= halfwidth; ++n) basis.push_back({m, n, g * m, g * n});
  return basis;
}

std::vector<ReciprocalVector> reciprocal_basis_around(Vec2 k, int halfwidth, double pitch) {
  const double g = 2.0 * constants::pi / pitch;
  const double limit = halfwidth + 0.5 + 1e-9;
  auto range = [&](double kc) {
    const double f = kc / g;
    return std::pair{static_cast<int>(std::ceil(-limit - f)), static_cast<int>(std::floor(limit - f))};
  };
  const auto [mx0, mx1] = range(k.x);
  const auto [my0, my1] = range(k.y);
  std::vector<ReciprocalVector> basis;
  basis.reserve(static_cast<std::size_t>((mx1 - mx0 + 1) * (my1 - my0 + 1)));
  for (int m = mx0; m <= mx1; ++m)
    for (int n = my0; n <= my1; ++n) basis.push_back({m, n, g * m, g * n});
  return basis;
}

PatternFourier::PatternFourier(const LatticeSpec& lattice, int reach)
    : lattice_(lattice), reach_(reach), table_(static_cast<std::size_t>(2 * reach + 1)) {
  const double a = constants::pi * std::sqrt(lattice.fill_factor);
  for (int m = -reach; m <= reach; ++m) table_[static_cast<std::size_t>(m + reach)] = sinc(a * m);
}

double PatternFourier::operator()(int m, int n) const {
  if (std::abs(m) > reach_ || std::abs(n) > reach_) return fourier_coefficient(lattice_, m, n);
  return lattice_.dphi * lattice_.fill_factor * table_[static_cast<std::size_t>(m + reach_)] *
         table_[static_cast<std::size_t>(n + reach_)];
}

}  // namespace czband
