#include "czband/kp.hpp"

#include <algorithm>
#include <cmath>

#include "czband/constants.hpp"
#include "czband/error.hpp"
#include "czband/zeeman.hpp"

namespace czband {

KpModel kp_from_opw(const BandEdges& edges, const LatticeSpec& lattice, const KpSource& source) {
  if (!(edges.t5 < edges.t1) || !(edges.t1 < edges.t5p))
    throw Error("kp_from_opw: band edges must satisfy T5 < T1 < T5' (got " +
                std::to_string(edges.t5) + ", " + std::to_string(edges.t1) + ", " +
                std::to_string(edges.t5p) + " rad/s detuning)");
  const auto dp = derive_params(lattice);
  KpModel model;
  model.omega_ref = edges.omega0;
  model.edge_T5 = edges.t5;
  model.edge_T1 = edges.t1;
  model.edge_T5p = edges.t5p;
  model.p_interband = dp.p_interband;
  model.m0 = dp.m0;
  model.n_refr = lattice.n_refr;
  model.pitch = lattice.pitch;
  if (const auto* masses = std::get_if<MassSource>(&source)) {
    model.m_plus = -0.5 * (dp.m0 / masses->m_T5 - 1.0);
    model.m_minus = 0.5 * (dp.m0 / masses->m_T5p - 1.0);
  } else {
    const auto m = m_closed_form(lattice, dp);
    model.m_plus = m.plus;
    model.m_minus = m.minus;
  }
  return model;
}

MassSource manifold_fsum_masses(const BandEdges& edges, const DerivedParams& dp) {
  const double scale = 4.0 * dp.p_interband * dp.p_interband / (constants::hbar * dp.m0);
  return {dp.m0 / (1.0 - scale / (edges.t1 - edges.t5)),
          dp.m0 / (1.0 + scale / (edges.t5p - edges.t1))};
}

double kp_validity_radius(double pitch) { return 0.5 * constants::pi / pitch; }

KpBlocks build_kp_hamiltonian(const KpModel& model, Vec2 q, const RotationSpec& rot,
                              double subtract) {
  const cplx kp(q.x, q.y);
  const cplx km(q.x, -q.y);
  const double base = model.omega_ref - subtract;
  const double free = constants::hbar * q.norm2() / (2.0 * model.m0);
  const double a = model.p_interband / model.m0;
  const double w = rot.omega_z / (model.n_refr * model.n_refr);
  const double r = constants::hbar / (2.0 * model.p_interband);
  const double mp = model.m_plus;
  const double mm = model.m_minus;
  const double mt = model.m_total();

  const std::array<double, 4> h0 = {model.edge_T5p, model.edge_T1, model.edge_T1, model.edge_T5};
  const std::array<std::array<cplx, 4>, 4> hkp = {{
      {0.0, a * km, a * kp, 0.0},
      {a * kp, 0.0, 0.0, a * km},
      {a * km, 0.0, 0.0, -a * kp},
      {0.0, a * kp, -a * km, 0.0},
  }};
  const std::array<std::array<cplx, 4>, 4> hom = {{
      {-w, w * mm * r * km, -w * mm * r * kp, 0.0},
      {w * mm * r * kp, -w * (1.0 - mt), 0.0, w * mp * r * km},
      {-w * mm * r * km, 0.0, -w * (mt + 1.0), w * mp * r * kp},
      {0.0, w * mp * r * kp, w * mp * r * km, -w},
  }};

  KpBlocks blocks{HermitianMatrix(4), HermitianMatrix(4)};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const cplx diag = i == j ? cplx(base + h0[i] + free) : cplx(0.0);
      blocks.upper(i, j) = diag + hkp[i][j] + hom[i][j];
      blocks.lower(i, j) = diag + std::conj(hkp[i][j]) - std::conj(hom[i][j]);
    }
  return blocks;
}

KpSpectrum kp_bands(const KpModel& model, std::span<const Vec2> qs, const RotationSpec& rot) {
  KpSpectrum spectrum;
  spectrum.reserve(qs.size());
  for (const Vec2 q : qs) {
    const auto blocks = build_kp_hamiltonian(model, q, rot, model.omega_ref);
    KpPoint point;
    point.q = q;
    for (const auto& [block, tag] : {std::pair{&blocks.upper, +1}, std::pair{&blocks.lower, -1}}) {
      const auto es = eigh(*block);
      for (std::size_t j = 0; j < 4; ++j) {
        KpLevel level;
        level.offset = es.values[j];
        level.omega = model.omega_ref + level.offset;
        level.block = tag;
        const auto v = es.vector(j);
        std::copy(v.begin(), v.end(), level.vector.begin());
        point.levels.push_back(level);
      }
    }
    spectrum.push_back(std::move(point));
  }
  return spectrum;
}

namespace {

// Rotation shifts of one block at q = 0 inside each H_0 eigenspace.
std::array<KpCentreLevel, 4> centre_block(const KpModel& model, const HermitianMatrix& rotation) {
  const std::array<double, 4> h0 = {model.edge_T5p, model.edge_T1, model.edge_T1, model.edge_T5};
  std::array<KpCentreLevel, 4> out{};
  std::array<bool, 4> done{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> idx;
    for (std::size_t j = i; j < 4; ++j)
      if (h0[j] == h0[i]) idx.push_back(j);
    HermitianMatrix sub(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = rotation(idx[a], idx[b]);
    const auto es = eigh(sub);
    std::vector<bool> taken(idx.size(), false);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      const auto v = es.vector(e);
      std::size_t best = 0;
      double weight = -1.0;
      for (std::size_t a = 0; a < idx.size(); ++a)
        if (!taken[a] && std::norm(v[a]) > weight) {
          weight = std::norm(v[a]);
          best = a;
        }
      taken[best] = true;
      out[idx[best]] = {h0[idx[best]], es.values[e]};
      done[idx[best]] = true;
    }
  }
  return out;
}

}  // namespace

KpCentre kp_levels_at_T(const KpModel& model, const RotationSpec& rot) {
  // With the edges and free term removed only the rotation part remains.
  KpModel bare = model;
  bare.edge_T5 = bare.edge_T1 = bare.edge_T5p = 0.0;
  const auto blocks = build_kp_hamiltonian(bare, {0.0, 0.0}, rot, model.omega_ref);
  return {centre_block(model, blocks.upper), centre_block(model, blocks.lower)};
}

ZeemanSplitting zeeman_splittings_at_T(const KpModel& model, const RotationSpec& rot) {
  const auto c = kp_levels_at_T(model, rot);
  return {c.lower[3].shift - c.upper[3].shift, c.upper[1].shift - c.upper[2].shift};
}

double kp_effective_mass_fd(const KpModel& model, KpBranch branch, Vec2 direction, double step) {
  const double dn = direction.norm();
  if (!(dn > 0.0) || !(step > 0.0)) throw Error("kp_effective_mass_fd: need direction and step");
  const Vec2 d = (1.0 / dn) * direction;
  const std::size_t index = branch == KpBranch::T5 ? 0 : 3;
  const double edge = branch == KpBranch::T5 ? model.edge_T5 : model.edge_T5p;
  const RotationSpec still{};
  auto at = [&](double s) {
    const auto blocks = build_kp_hamiltonian(model, s * d, still, model.omega_ref);
    return eigh(blocks.upper).values[index] - edge;
  };
  auto second = [&](double h) { return (at(h) + at(-h) - 2.0 * at(0.0)) / (h * h); };
  const double curvature = (4.0 * second(0.5 * step) - second(step)) / 3.0;
  return constants::hbar / curvature;
}

}  // namespace czband
