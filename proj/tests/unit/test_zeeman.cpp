#include "doctest.h"
#include "fixtures.hpp"

#include "czband/error.hpp"
#include "czband/zeeman.hpp"

using namespace czband;
using fixtures::rel;

namespace {

double s_of(double ff) {
  const double x = fixtures::kPi * std::sqrt(ff);
  return std::sin(x) / x;
}

// Same closed form written in wavelength units:
// 2 n l_z P^2 / (hbar m0 c) = lambda^2 pi / (2 n^2 pitch^2) after substituting
// l_z = lambda/n, P = hbar pi/(sqrt 2 pitch), m0 = 2 pi n^2 hbar/(lambda c).
MPair oracle(const LatticeSpec& l) {
  const double pre = l.lambda_vac * l.lambda_vac * fixtures::kPi /
                     (2.0 * l.n_refr * l.n_refr * l.pitch * l.pitch * l.fill_factor * l.dphi);
  const double s = s_of(l.fill_factor);
  return {pre / (s * (1.0 + s)), pre / (s * (1.0 - s))};
}

}  // namespace

TEST_CASE("closed-form M for the weak lattice") {
  const auto l = fixtures::weak();
  const auto m = m_closed_form(l, derive_params(l));
  const auto o = oracle(l);
  CHECK(rel(m.plus, o.plus) < 1e-12);
  CHECK(rel(m.minus, o.minus) < 1e-12);
  CHECK(rel(pixel_sinc(0.65), s_of(0.65)) < 1e-14);
  CHECK(rel(m.plus, 403.639) < 1e-5);
  CHECK(rel(m.minus, 639.052) < 1e-5);
  CHECK(rel(m.total(), 1042.69) < 1e-5);
  CHECK(m.total() > 1e3);
}

TEST_CASE("closed-form scalings") {
  auto l = fixtures::weak();
  const auto base = m_closed_form(l, derive_params(l));

  auto l10 = l;
  l10.dphi = 1e-3;
  CHECK(rel(m_closed_form(l10, derive_params(l10)).total(), base.total() / 10.0) < 1e-14);

  auto l6 = l;
  l6.pitch = 6e-6;
  CHECK(rel(m_closed_form(l6, derive_params(l6)).total(), base.total() * 4.0 / 9.0) < 1e-14);

  auto big = l;
  big.lambda_vac *= 1.7;
  big.pitch *= 1.7;
  const auto mb = m_closed_form(big, derive_params(big));
  CHECK(rel(mb.plus, base.plus) < 1e-13);
  CHECK(rel(mb.minus, base.minus) < 1e-13);

  auto neg = l;
  neg.dphi = -1e-4;
  const auto mn = m_closed_form(neg, derive_params(neg));
  CHECK(mn.plus == doctest::Approx(-base.plus));
  CHECK(mn.minus == doctest::Approx(-base.minus));

  for (double ff = 0.05; ff < 0.99; ff += 0.05) {
    l.fill_factor = ff;
    const auto m = m_closed_form(l, derive_params(l));
    CHECK(m.minus > m.plus);
    CHECK(m.plus > 0.0);
  }

  l = fixtures::weak();
  l.dphi = 0.0;
  CHECK_THROWS_AS(m_closed_form(l, derive_params(l)), ValidationError);
}

TEST_CASE("splittings") {
  const auto zero = splittings(403.0, 639.0, 3.53, 0.0);
  CHECK(zero.delta_omega_S == 0.0);
  CHECK(zero.delta_omega_L == 0.0);

  const auto s = splittings(500.0, 542.0, 3.53, 100.0);
  CHECK(rel(s.delta_omega_S, 16.05) < 1e-3);
  CHECK(rel(s.delta_omega_L, 1.673e4) < 1e-3);
  CHECK(rel(s.delta_omega_S, 200.0 / (3.53 * 3.53)) < 1e-15);

  const auto flipped = splittings(500.0, 542.0, 3.53, -100.0);
  CHECK(flipped.delta_omega_S == -s.delta_omega_S);
  CHECK(flipped.delta_omega_L == -s.delta_omega_L);

  // Exactly linear: slope from two rates reproduces a third.
  const auto a = splittings(403.6, 639.1, 3.53, 1.0);
  const auto b = splittings(403.6, 639.1, 3.53, 1e6);
  const double slope = (b.delta_omega_L - a.delta_omega_L) / (1e6 - 1.0);
  CHECK(rel(splittings(403.6, 639.1, 3.53, 777.0).delta_omega_L, slope * 777.0) < 1e-10);
}

TEST_CASE("wave-function spread") {
  const auto l = fixtures::weak();
  const auto dp = derive_params(l);
  const auto m = m_closed_form(l, dp);
  const double r = spread_rms(m.plus, m.minus, dp.p_interband);
  const double p = fixtures::kHbar * fixtures::kPi / (std::sqrt(2.0) * l.pitch);
  CHECK(rel(r, fixtures::kHbar * std::sqrt((m.plus * m.plus + m.minus * m.minus) / 2.0) / p) < 1e-13);
  CHECK(rel(r, 9.6238e-4) < 1e-4);
  CHECK(r / l.pitch > 200.0);
  CHECK(r > l.pitch);

  CHECK(rel(spread_rms(50.0, 50.0, p), fixtures::kHbar * 50.0 / p) < 1e-14);
  CHECK(rel(spread_rms(2.0 * m.plus, 2.0 * m.minus, p), 2.0 * r) < 1e-14);
}

TEST_CASE("consistency ratio") {
  auto l = fixtures::weak();
  const auto dp = derive_params(l);
  const auto m = m_closed_form(l, dp);
  const double s = s_of(0.65);
  const double ratio = consistency_ratio(l, m.plus, m.minus, l.n_refr);
  CHECK(std::abs(ratio - 1.0 / std::sqrt(1.0 + s * s)) < 1e-12);
  CHECK(ratio == doctest::Approx(0.9752).epsilon(5e-4));

  auto l2 = l;
  l2.dphi = 3e-3;
  const auto m2 = m_closed_form(l2, derive_params(l2));
  CHECK(std::abs(consistency_ratio(l2, m2.plus, m2.minus, l.n_refr) - ratio) < 1e-12);

  l.fill_factor = 0.999999;
  const auto m3 = m_closed_form(l, derive_params(l));
  CHECK(consistency_ratio(l, m3.plus, m3.minus, l.n_refr) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("analyze bundles the closed-form quantities") {
  const auto r = analyze(fixtures::weak());
  CHECK(r.delta_omega_S_per_Omega == doctest::Approx(2.0 / (3.53 * 3.53)).epsilon(1e-15));
  CHECK(r.delta_omega_L_per_Omega == doctest::Approx(2.0 * r.m_total / (3.53 * 3.53)).epsilon(1e-15));
  CHECK(rel(r.delta_omega_L_per_Omega, 167.354) < 1e-5);
  CHECK(r.m_total == r.m_plus + r.m_minus);
  CHECK(rel(r.sinc_s, s_of(0.65)) < 1e-14);
}

TEST_CASE("effective index") {
  const auto dp = derive_params(fixtures::strong());
  const Vec3 z{0.0, 0.0, 1.0};
  CHECK(effective_index(3.53, {}, {1e-3, 2e-3, 0.0}, z, dp.omega0, +1) == 3.53);

  const double omega0 = 2.0 * fixtures::kPi * fixtures::kC / 960e-9;
  const double shift = effective_index(3.53, {0.0, 0.0, 1e3}, {}, z, dp.omega0, +1) - 3.53;
  // Differences against n = 3.53 carry a 4.4e-16 rounding step.
  CHECK(std::abs(shift - 1e3 / (omega0 * 3.53)) < 1e-15);
  CHECK(std::abs(shift - 1.44e-13) < 1e-15);
  const double right = effective_index(3.53, {0.0, 0.0, 1e3}, {}, z, dp.omega0, -1) - 3.53;
  CHECK(std::abs(right + shift) < 1e-15);

  // Sagnac term is odd in the propagation direction.
  const Vec3 w{0.0, 0.0, 50.0};
  const Vec3 r{0.2, 0.0, 0.0};
  const Vec3 tau{0.0, 1.0, 0.0};
  const double fwd = effective_index(3.53, w, r, tau, dp.omega0, +1) - 3.53;
  const double back = effective_index(3.53, w, r, -1.0 * tau, dp.omega0, +1) - 3.53;
  CHECK(fwd == doctest::Approx(50.0 * 0.2 / fixtures::kC).epsilon(1e-7));
  CHECK(back == doctest::Approx(-fwd).epsilon(1e-7));
}
