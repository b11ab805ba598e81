#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

#include "czband/error.hpp"
#include "czband/kp.hpp"
#include "czband/opw.hpp"
#include "czband/validate.hpp"

using namespace czband;
using fixtures::rel;

namespace {

const KpModel& strong_model() {
  static const KpModel model = [] {
    const auto l = fixtures::strong();
    return kp_from_opw(band_edges(OpwSolver(l, 7)), l, ClosedFormSource{});
  }();
  return model;
}

const KpModel& weak_model() {
  static const KpModel model = [] {
    const auto l = fixtures::weak();
    return kp_from_opw(band_edges(OpwSolver(l, 7)), l, ClosedFormSource{});
  }();
  return model;
}

std::vector<double> spectrum(const HermitianMatrix& h) { return eigh(h).values; }

double scale_of(const KpModel& m) { return m.edge_T5p - m.edge_T5; }

}  // namespace

TEST_CASE("model construction") {
  const auto& m = weak_model();
  CHECK(m.m_plus == doctest::Approx(403.6).epsilon(2e-3));
  CHECK(m.m_minus == doctest::Approx(639.1).epsilon(2e-3));
  CHECK(m.m_total() > 1e3);

  const auto l = fixtures::weak();
  const auto dp = derive_params(l);
  const BandEdges edges{dp.omega0, m.edge_T5, m.edge_T1, m.edge_T5p};
  const MassSource masses{dp.m0 / (1.0 - 2.0 * 403.0), dp.m0 / (1.0 + 2.0 * 639.0)};
  const auto from_masses = kp_from_opw(edges, l, masses);
  CHECK(from_masses.m_plus == doctest::Approx(403.0).epsilon(1e-12));
  CHECK(from_masses.m_minus == doctest::Approx(639.0).epsilon(1e-12));

  CHECK_THROWS_AS(kp_from_opw({dp.omega0, 1.0, 1.0, 1.0}, l, ClosedFormSource{}), Error);
  CHECK_THROWS_AS(kp_from_opw({dp.omega0, 3.0, 2.0, 5.0}, l, ClosedFormSource{}), Error);
  CHECK(kp_validity_radius(l.pitch) == doctest::Approx(0.5 * fixtures::kPi / l.pitch));
}

TEST_CASE("blocks at q = 0") {
  const auto& m = strong_model();
  const auto still = build_kp_hamiltonian(m, {0.0, 0.0}, {}, m.omega_ref);
  for (const auto* b : {&still.upper, &still.lower}) {
    CHECK((*b)(0, 0).real() == m.edge_T5p);
    CHECK((*b)(1, 1).real() == m.edge_T1);
    CHECK((*b)(2, 2).real() == m.edge_T1);
    CHECK((*b)(3, 3).real() == m.edge_T5);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) CHECK((*b)(i, j) == cplx(0.0));
  }

  // Rotation at q = 0 is diagonal: -(W/n^2) diag(1, 1-M, 1+M, 1) in the upper block.
  const double w = 1e3;
  const double wn = w / (m.n_refr * m.n_refr);
  const auto rot = build_kp_hamiltonian(m, {0.0, 0.0}, {w}, m.omega_ref);
  const double mt = m.m_total();
  CHECK(rot.upper(0, 0).real() == doctest::Approx(m.edge_T5p - wn));
  CHECK(rot.upper(1, 1).real() == doctest::Approx(m.edge_T1 - (1.0 - mt) * wn));
  CHECK(rot.upper(2, 2).real() == doctest::Approx(m.edge_T1 - (1.0 + mt) * wn));
  CHECK(rot.upper(3, 3).real() == doctest::Approx(m.edge_T5 - wn));
  CHECK(rot.lower(0, 0).real() == doctest::Approx(m.edge_T5p + wn));
  CHECK(rot.lower(3, 3).real() == doctest::Approx(m.edge_T5 + wn));
}

TEST_CASE("blocks are Hermitian for random q and Omega") {
  const auto& m = strong_model();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> q(-3e5, 3e5), w(-1e6, 1e6);
  for (int i = 0; i < 50; ++i) {
    const auto b = build_kp_hamiltonian(m, {q(rng), q(rng)}, {w(rng)}, m.omega_ref);
    CHECK(b.upper.hermiticity_defect() < 1e-15);
    CHECK(b.lower.hermiticity_defect() < 1e-15);
  }
}

TEST_CASE("block conjugacy: spec upper(q, W) == spec lower(q, -W)") {
  const auto& m = strong_model();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> q(-3e5, 3e5), w(-1e8, 1e8);
  for (int i = 0; i < 50; ++i) {
    const Vec2 k{q(rng), q(rng)};
    const double om = w(rng);
    const auto a = spectrum(build_kp_hamiltonian(m, k, {om}, m.omega_ref).upper);
    const auto b = spectrum(build_kp_hamiltonian(m, k, {-om}, m.omega_ref).lower);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12 * scale_of(m));
  }
}

TEST_CASE("spin degeneracy and time reversal at Omega = 0") {
  const auto& m = strong_model();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> q(-3e5, 3e5);
  for (int i = 0; i < 30; ++i) {
    const Vec2 k{q(rng), q(rng)};
    const auto b = build_kp_hamiltonian(m, k, {}, m.omega_ref);
    const auto up = spectrum(b.upper);
    const auto lo = spectrum(b.lower);
    const auto rev = spectrum(build_kp_hamiltonian(m, -1.0 * k, {}, m.omega_ref).upper);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(up[j] - lo[j]) <= 1e-12 * scale_of(m));
      CHECK(std::abs(up[j] - rev[j]) <= 1e-12 * scale_of(m));
    }
  }
}

TEST_CASE("point-group covariance of the upper block") {
  const auto& m = strong_model();
  const Vec2 k{1.7e5, 0.6e5};
  const auto a = spectrum(build_kp_hamiltonian(m, k, {300.0}, m.omega_ref).upper);
  const auto b = spectrum(build_kp_hamiltonian(m, {-k.y, k.x}, {300.0}, m.omega_ref).upper);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12 * scale_of(m));
}

TEST_CASE("kp_bands layout") {
  const auto& m = strong_model();
  const std::vector<Vec2> qs = {{0.0, 0.0}, {1e5, 0.0}, {-5e4, -5e4}};
  const auto s = kp_bands(m, qs, {});
  REQUIRE(s.size() == 3);
  for (const auto& p : s) {
    REQUIRE(p.levels.size() == 8);
    for (int j = 0; j < 4; ++j) {
      CHECK(p.levels[j].block == +1);
      CHECK(p.levels[j + 4].block == -1);
      if (j > 0) CHECK(p.levels[j].offset >= p.levels[j - 1].offset);
      CHECK(p.levels[j].omega == m.omega_ref + p.levels[j].offset);
    }
  }
  CHECK(s[0].levels[0].offset == m.edge_T5);
  CHECK(s[0].levels[3].offset == m.edge_T5p);
}

TEST_CASE("degenerate manifold splits linearly in q") {
  // With all edges set equal the k.p term is the only perturbation. The printed
  // coupling has eigenvalues +-sqrt(2) (P/m0) |q_x +- q_y|, so along an axis the
  // pair leaves q = 0 with slope sqrt(2) P/m0 and the spectrum is only C4 symmetric.
  KpModel flat = strong_model();
  flat.edge_T5 = flat.edge_T1 = flat.edge_T5p = 0.0;
  const double a = flat.p_interband / flat.m0;
  const double q = 1e-3 * fixtures::kPi / flat.pitch;
  for (const Vec2 dir : {Vec2{1.0, 0.0}, Vec2{0.6, 0.8}, Vec2{-0.28, 0.96}}) {
    const Vec2 k = q * dir;
    const auto e = spectrum(build_kp_hamiltonian(flat, k, {}, flat.omega_ref).upper);
    const double free = fixtures::kHbar * q * q / (2.0 * flat.m0);
    const double outer = std::sqrt(2.0) * a * (std::abs(k.x) + std::abs(k.y));
    const double inner = std::sqrt(2.0) * a * std::abs(std::abs(k.x) - std::abs(k.y));
    CHECK(rel(e[3] - free, outer) < 1e-10);
    CHECK(rel(free - e[0], outer) < 1e-10);
    if (inner > 0.0) CHECK(rel(e[2] - free, inner) < 1e-8);
    else CHECK(std::abs(e[2] - free) < 1e-10 * outer);
  }
  const auto axis = spectrum(build_kp_hamiltonian(flat, {q, 0.0}, {}, flat.omega_ref).upper);
  CHECK(rel(axis[3] - fixtures::kHbar * q * q / (2.0 * flat.m0), std::sqrt(2.0) * a * q) < 1e-10);
}

TEST_CASE("rotation levels at T") {
  const auto& m = weak_model();
  const double n2 = m.n_refr * m.n_refr;
  for (double w : {1.0, 1e3, 1e6, -7.0}) {
    const auto z = zeeman_splittings_at_T(m, {w});
    CHECK(rel(z.delta_omega_S, 2.0 * w / n2) < 1e-12);
    CHECK(rel(z.delta_omega_L, 2.0 * m.m_total() * w / n2) < 1e-12);
  }
  CHECK(rel(zeeman_splittings_at_T(m, {1.0}).delta_omega_S, 0.160503) < 1e-5);
  CHECK(rel(zeeman_splittings_at_T(m, {1.0}).delta_omega_L, 167.3) < 1e-3);
  const auto zero = zeeman_splittings_at_T(m, {0.0});
  CHECK(zero.delta_omega_S == 0.0);
  CHECK(zero.delta_omega_L == 0.0);

  // Every level at q = 0 is linear in Omega: shift(2W) = 2 shift(W).
  const auto c1 = kp_levels_at_T(m, {123.0});
  const auto c2 = kp_levels_at_T(m, {246.0});
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(c2.upper[i].shift - 2.0 * c1.upper[i].shift) <= 1e-12 * std::abs(c2.upper[i].shift));
    CHECK(std::abs(c2.lower[i].shift - 2.0 * c1.lower[i].shift) <= 1e-12 * std::abs(c2.lower[i].shift));
  }
}

TEST_CASE("f-sum round trip of the k.p masses") {
  const auto l = fixtures::strong();
  const OpwSolver solver(l, 7);
  const auto edges = band_edges(solver);
  const auto m = kp_from_opw(edges, l, manifold_fsum_masses(edges, solver.params()));
  const auto r = fsum_round_trip(m);
  CHECK(r.step == doctest::Approx(1e-4 * fixtures::kPi / l.pitch));
  CHECK(r.error_T5 < 1e-6);
  CHECK(r.error_T5p < 1e-6);

  // The manifold f-sum masses equal the closed four-wave expression.
  const double p = m.p_interband;
  CHECK(rel(m.m_plus, 2.0 * p * p / (fixtures::kHbar * m.m0 * (edges.t1 - edges.t5))) < 1e-12);
  CHECK(rel(m.m_minus, 2.0 * p * p / (fixtures::kHbar * m.m0 * (edges.t5p - edges.t1))) < 1e-12);
}

TEST_CASE("weak-lattice f-sum round trip needs the reduced step") {
  const auto l = fixtures::weak();
  const OpwSolver solver(l, 7);
  const auto edges = band_edges(solver);
  const auto m = kp_from_opw(edges, l, manifold_fsum_masses(edges, solver.params()));
  const double step = kp_mass_step(m);
  CHECK(step < 1e-4 * fixtures::kPi / l.pitch);
  const auto r = fsum_round_trip(m, step);
  CHECK(r.error_T5 < 1e-6);
  CHECK(r.error_T5p < 1e-6);
}

TEST_CASE("k.p bands follow the plane-wave bands near T") {
  const OpwSolver solver(fixtures::strong(), 7);
  const auto a = kp_opw_agreement(solver, strong_model());
  CHECK(a.points == 22);
  CHECK(a.worst_fraction < 0.05);
}
