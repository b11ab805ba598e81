#include "czband/opw.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "czband/constants.hpp"
#include "czband/error.hpp"
#include "czband/parallel.hpp"

namespace czband {

// ---------------------------------------------------------------------------
// k-paths

Vec2 high_symmetry_point(std::string_view name, double pitch) {
  const double q = constants::pi / pitch;
  std::string up;
  for (char ch : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (up == "G") return {0.0, 0.0};
  if (up == "Z") return {q, 0.0};
  if (up == "T") return {q, q};
  throw ValidationError("kpath: unknown point '" + std::string(name) + "' (expected G, Z or T)",
                        "kpath");
}

std::vector<KPoint> make_kpath(std::string_view spec, int samples_per_segment, double pitch) {
  if (samples_per_segment < 1) throw ValidationError("samples must be >= 1", "samples");
  std::vector<std::string> names;
  std::stringstream ss{std::string(spec)};
  for (std::string token; std::getline(ss, token, ':');) names.push_back(token);
  if (!spec.empty() && spec.back() == ':') names.emplace_back();
  if (names.size() < 2) throw ValidationError("kpath: need at least two points", "kpath");

  std::vector<Vec2> vertices;
  for (const auto& name : names) vertices.push_back(high_symmetry_point(name, pitch));

  const double unit = constants::pi / pitch;
  std::vector<KPoint> path;
  double pos = 0.0;
  for (std::size_t seg = 0; seg + 1 < vertices.size(); ++seg) {
    const Vec2 a = vertices[seg];
    const Vec2 b = vertices[seg + 1];
    const double length = (b - a).norm() / unit;
    const bool last = seg + 2 == vertices.size();
    const int count = samples_per_segment + (last ? 1 : 0);
    for (int s = 0; s < count; ++s) {
      const double t = static_cast<double>(s) / samples_per_segment;
      KPoint kp;
      kp.k = a + t * (b - a);
      kp.path_pos = pos + t * length;
      if (s == 0) {
        kp.label = names[seg];
        kp.k = a;
      } else if (s == samples_per_segment) {
        kp.label = names[seg + 1];
        kp.k = b;
      }
      for (auto& ch : kp.label) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      path.push_back(std::move(kp));
    }
    pos += length;
  }
  return path;
}

// ---------------------------------------------------------------------------
// Hamiltonian

std::string_view to_string(ScalarRep rep) {
  switch (rep) {
    case ScalarRep::T1: return "T1";
    case ScalarRep::T4: return "T4";
    case ScalarRep::T5: return "T5";
    case ScalarRep::Unclassified: break;
  }
  return "unclassified";
}

HermitianMatrix build_hamiltonian(const DerivedParams& dp, const PatternFourier& pf,
                                  std::span<const ReciprocalVector> basis, Vec2 k_perp,
                                  EnergyFrame frame) {
  const auto n = basis.size();
  HermitianMatrix h(n);
  const double rest = frame == EnergyFrame::Absolute ? dp.rest_frequency() : 0.0;
  const double kin = dp.kinetic_coefficient();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 kappa = k_perp + Vec2{basis[i].gx, basis[i].gy};
    for (std::size_t j = 0; j < n; ++j) {
      double value = -dp.v_prefactor * pf(basis[i].m - basis[j].m, basis[i].n - basis[j].n);
      if (i == j) value += rest + kin * kappa.norm2();
      h(i, j) = value;
    }
  }
  return h;
}

OpwSolver::OpwSolver(const LatticeSpec& lattice, int basis_halfwidth)
    : lattice_(lattice),
      params_(derive_params(lattice)),
      halfwidth_(basis_halfwidth),
      fourier_(lattice, 2 * basis_halfwidth + 2) {
  if (basis_halfwidth < 1) throw ValidationError("basis_halfwidth must be >= 1", "basis_halfwidth");
}

Vec2 OpwSolver::t_point() const { return high_symmetry_point("T", lattice_.pitch); }

std::vector<ReciprocalVector> OpwSolver::basis_at(Vec2 k) const {
  return reciprocal_basis_around(k, halfwidth_, lattice_.pitch);
}

std::vector<BlochState> OpwSolver::solve(Vec2 k_perp, int n_bands,
                                         std::optional<Vec2> anchor) const {
  const auto basis =
      std::make_shared<const std::vector<ReciprocalVector>>(basis_at(anchor.value_or(k_perp)));
  const auto h = build_hamiltonian(params_, fourier_, *basis, k_perp, EnergyFrame::Detuning);
  EigenSystem es;
  try {
    es = eigh(h);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " at k = (" + std::to_string(k_perp.x) + ", " +
                         std::to_string(k_perp.y) + ") rad/m");
  }
  const auto total = es.values.size();
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(n_bands, 0)), total);

  std::vector<BlochState> states(count);
  for (std::size_t b = 0; b < count; ++b) {
    auto& s = states[b];
    s.band = static_cast<int>(b);
    s.k_perp = k_perp;
    s.detuning = es.values[b];
    s.omega = params_.omega0 + s.detuning;
    const auto v = es.vector(b);
    s.coefficients.assign(v.begin(), v.end());
    s.basis = basis;
    std::size_t lo = b;
    std::size_t hi = b;
    while (lo > 0 && es.values[lo] - es.values[lo - 1] <= kDegeneracyTolerance) --lo;
    while (hi + 1 < total && es.values[hi + 1] - es.values[hi] <= kDegeneracyTolerance) ++hi;
    s.degeneracy = 2 * static_cast<int>(hi - lo + 1);
  }
  return states;
}

BandStructure solve_bands(const ExperimentConfig& config, const SolveOptions& options) {
  const OpwSolver solver(config.lattice, config.basis_halfwidth);
  const auto path = make_kpath(config.kpath, config.samples_per_segment, config.lattice.pitch);

  BandStructure bs;
  bs.config = config;
  bs.n_bands = options.n_bands;
  bs.points.resize(path.size());
  parallel_for(path.size(), options.threads, [&](std::size_t i) {
    auto& point = bs.points[i];
    point.kpoint = path[i];
    point.states = solver.solve(path[i].k, options.n_bands);
    if (path[i].label == "T") classify_T_states(point.states, config.lattice.pitch);
  });
  return bs;
}

// ---------------------------------------------------------------------------
// T-point classification

namespace {

struct Combo {
  ScalarRep rep;
  std::vector<cplx> vec;  // over the full basis
};

// Symmetrised combinations of the four plane waves at the nearest
// equivalent T points: S (cos cos), X (sin cos), Y (cos sin), XY (sin sin).
std::vector<Combo> t_point_combos(std::span<const ReciprocalVector> basis) {
  std::vector<Combo> combos = {{ScalarRep::T1, {}}, {ScalarRep::T5, {}}, {ScalarRep::T5, {}},
                               {ScalarRep::T4, {}}};
  for (auto& c : combos) c.vec.assign(basis.size(), 0.0);
  int found = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int m = basis[i].m;
    const int n = basis[i].n;
    if ((m != 0 && m != -1) || (n != 0 && n != -1)) continue;
    const double sx = m == 0 ? 1.0 : -1.0;
    const double sy = n == 0 ? 1.0 : -1.0;
    combos[0].vec[i] = 0.5;
    combos[1].vec[i] = 0.5 * sx;
    combos[2].vec[i] = 0.5 * sy;
    combos[3].vec[i] = 0.5 * sx * sy;
    ++found;
  }
  if (found != 4) throw Error("classify_T_states: basis does not contain the four T plane waves");
  return combos;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// Removes the components along `ortho` and normalises; returns false for a
// vector that vanishes after projection.
bool orthonormalise(std::vector<cplx>& v, const std::vector<std::vector<cplx>>& ortho) {
  for (const auto& o : ortho) {
    const cplx c = inner(o, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * o[i];
  }
  const double norm = std::sqrt(std::real(inner(v, v)));
  if (norm < 1e-8) return false;
  for (auto& x : v) x /= norm;
  return true;
}

}  // namespace

std::vector<RepGroup> classify_T_states(std::vector<BlochState>& states, double pitch) {
  if (states.empty()) return {};
  const Vec2 t = high_symmetry_point("T", pitch);
  for (const auto& s : states) {
    if ((s.k_perp - t).norm() > 1e-9 * t.norm())
      throw Error("classify_T_states: state not computed at the T point");
    if (!s.basis || s.basis != states.front().basis)
      throw Error("classify_T_states: states must share one plane-wave basis");
  }
  const auto& basis = *states.front().basis;

  const auto combos = t_point_combos(basis);
  std::vector<RepGroup> groups;
  for (std::size_t first = 0; first < states.size();) {
    std::size_t last = first;
    while (last + 1 < states.size() &&
           states[last + 1].detuning - states[last].detuning <= kDegeneracyTolerance)
      ++last;
    RepGroup group;
    double sum = 0.0;
    for (std::size_t b = first; b <= last; ++b) {
      group.bands.push_back(static_cast<int>(b));
      sum += states[b].detuning;
    }
    group.detuning = sum / static_cast<double>(group.bands.size());
    const std::size_t dim = group.bands.size();

    // Projection weight of every combination onto the group subspace.
    struct Owned {
      std::size_t combo;
      double weight;
    };
    std::vector<Owned> owned;
    for (std::size_t c = 0; c < combos.size(); ++c) {
      double w = 0.0;
      for (int b : group.bands) w += std::norm(inner(states[static_cast<std::size_t>(b)].coefficients, combos[c].vec));
      if (w >= 0.5) owned.push_back({c, w});
    }
    std::stable_sort(owned.begin(), owned.end(),
                     [](const Owned& a, const Owned& b) { return a.weight > b.weight; });
    if (owned.size() > dim) owned.resize(dim);
    std::sort(owned.begin(), owned.end(),
              [](const Owned& a, const Owned& b) { return a.combo < b.combo; });

    std::vector<std::vector<cplx>> rotated;
    std::vector<ScalarRep> labels;
    std::vector<double> projections;
    for (const auto& o : owned) {
      std::vector<cplx> u(basis.size(), 0.0);
      for (int b : group.bands) {
        const auto& v = states[static_cast<std::size_t>(b)].coefficients;
        const cplx a = inner(v, combos[o.combo].vec);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * v[i];
      }
      if (!orthonormalise(u, rotated)) continue;
      projections.push_back(std::norm(inner(combos[o.combo].vec, u)));
      rotated.push_back(std::move(u));
      labels.push_back(combos[o.combo].rep);
    }
    // Complete the subspace with whatever the symmetrised waves do not cover.
    for (int b : group.bands) {
      if (rotated.size() == dim) break;
      auto u = states[static_cast<std::size_t>(b)].coefficients;
      if (!orthonormalise(u, rotated)) continue;
      double best = 0.0;
      for (const auto& c : combos) best = std::max(best, std::norm(inner(c.vec, u)));
      projections.push_back(best);
      rotated.push_back(std::move(u));
      labels.push_back(ScalarRep::Unclassified);
    }
    for (std::size_t r = 0; r < rotated.size(); ++r) {
      auto& s = states[first + r];
      s.coefficients = std::move(rotated[r]);
      s.rep_label = labels[r];
      s.rep_projection = projections[r];
    }
    groups.push_back(std::move(group));
    first = last + 1;
  }
  return groups;
}

BandEdges band_edges(std::span<const BlochState> states, double omega0) {
  std::optional<double> s_edge, xy_pair_edge, xy_edge;
  double pair_sum = 0.0;
  int pair_count = 0;
  std::string found;
  for (std::size_t i = 0; i < std::min<std::size_t>(states.size(), 4); ++i) {
    const auto& st = states[i];
    const ScalarRep rep = st.rep_label.value_or(ScalarRep::Unclassified);
    found += (found.empty() ? "" : ", ") + std::string(to_string(rep));
    switch (rep) {
      case ScalarRep::T1:
        if (!s_edge) s_edge = st.detuning;
        break;
      case ScalarRep::T5:
        pair_sum += st.detuning;
        ++pair_count;
        xy_pair_edge = pair_sum / pair_count;
        break;
      case ScalarRep::T4:
        if (!xy_edge) xy_edge = st.detuning;
        break;
      case ScalarRep::Unclassified: break;
    }
  }
  if (!s_edge || !xy_pair_edge || !xy_edge)
    throw Error("band_edges: T1, T5 and T4 states required among the lowest four, found [" +
                found + "]");
  return {omega0, *s_edge, *xy_pair_edge, *xy_edge};
}

BandEdges band_edges(const OpwSolver& solver) {
  auto states = solver.solve(solver.t_point(), 4);
  classify_T_states(states, solver.lattice().pitch);
  return band_edges(states, solver.params().omega0);
}

// ---------------------------------------------------------------------------
// Curvature at T

double default_mass_step(double pitch) { return 1e-3 * constants::pi / pitch; }

double effective_mass_fd(const OpwSolver& solver, int band, Vec2 direction, double step) {
  if (step <= 0.0) step = default_mass_step(solver.lattice().pitch);
  const double dn = direction.norm();
  if (!(dn > 0.0)) throw Error("effective_mass_fd: zero direction");
  const Vec2 d = (1.0 / dn) * direction;
  const Vec2 t = solver.t_point();
  const auto ub = static_cast<std::size_t>(band);

  const auto centre = solver.solve(t, band + 2);
  if (ub >= centre.size()) throw Error("effective_mass_fd: band index out of range");
  const bool degenerate =
      (ub > 0 && centre[ub].detuning - centre[ub - 1].detuning <= kDegeneracyTolerance) ||
      (ub + 1 < centre.size() && centre[ub + 1].detuning - centre[ub].detuning <= kDegeneracyTolerance);
  if (degenerate)
    throw NumericalError("effective_mass_fd: band " + std::to_string(band) +
                         " is degenerate at T; use the k.p route");

  auto at = [&](double s) {
    const auto states = solver.solve(t + s * d, band + 2, t);
    const double overlap = std::norm(inner(centre[ub].coefficients, states[ub].coefficients));
    if (overlap < 0.5)
      throw NumericalError("effective_mass_fd: band " + std::to_string(band) +
                           " crosses a neighbour inside the stencil; use a smaller step or the "
                           "k.p route");
    return states[ub].detuning;
  };
  const double w0 = centre[ub].detuning;
  auto second = [&](double h) { return (at(h) + at(-h) - 2.0 * w0) / (h * h); };
  const double curvature = (4.0 * second(0.5 * step) - second(step)) / 3.0;
  return constants::hbar / curvature;
}

// ---------------------------------------------------------------------------
// Longitudinal factor and fields

namespace {

// floor(z/2l) + 1/2 - z/(2l): odd, 2l-periodic exponent of 1 + eta.
double eta_phase(double z, double l_z) {
  const double u = z / (2.0 * l_z);
  return std::floor(u) + 0.5 - u;
}

}  // namespace

LongitudinalProfile longitudinal_profile(const BlochState& state, const PatternFourier& pf,
                                         const DerivedParams& dp, int samples) {
  const auto& c = state.coefficients;
  if (!state.basis || c.size() != state.basis->size())
    throw Error("longitudinal_profile: state/basis size mismatch");
  const auto& basis = *state.basis;
  cplx alpha = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    cplx row = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
      row += pf(basis[i].m - basis[j].m, basis[i].n - basis[j].n) * c[j];
    alpha += std::conj(c[i]) * row;
  }
  LongitudinalProfile prof;
  prof.alpha = alpha.real();
  prof.z.resize(static_cast<std::size_t>(samples));
  prof.eta.resize(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const double z = -dp.l_z + 2.0 * dp.l_z * s / samples;
    prof.z[static_cast<std::size_t>(s)] = z;
    prof.eta[static_cast<std::size_t>(s)] =
        std::exp(cplx(0.0, prof.alpha * eta_phase(z, dp.l_z))) - 1.0;
  }
  return prof;
}

FieldReconstruction reconstruct_fields(const BlochState& state, const DerivedParams& dp, const RotationSpec& rot,
                                       std::array<cplx, 2> pol, std::span<const Vec3> positions,
                                       double alpha) {
  const auto& c = state.coefficients;
  if (!state.basis || c.size() != state.basis->size())
    throw Error("reconstruct_fields: state/basis size mismatch");
  const auto& basis = *state.basis;
  const double kz = dp.k_z;
  const double rot_coef = rot.omega_z / (dp.n_refr * constants::c);
  const double z_half = std::sqrt(dp.z_impedance);
  const cplx i_unit(0.0, 1.0);

  FieldReconstruction out;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (std::norm(c[j]) <= 1e-12) continue;
    const Vec2 kappa = state.k_perp + Vec2{basis[j].gx, basis[j].gy};
    out.max_transverse_ratio = std::max(out.max_transverse_ratio, kappa.norm() / kz);
  }
  out.paraxial_warning = out.max_transverse_ratio > 0.2;

  // Gauge operator on a single plane wave (d/dx_g -> i kappa_g) acting on the
  // transverse vector v at position r.
  auto gauge = [&](Vec2 kappa, std::array<cplx, 2> v, const Vec3& r) {
    const double kk = kappa.norm2() / (kz * kz);
    const std::array<double, 2> ka = {kappa.x, kappa.y};
    const std::array<double, 3> xa = {r.x, r.y, r.z};
    std::array<cplx, 3> e{};
    for (int a = 0; a < 2; ++a) {
      e[a] = v[a] * (1.0 + 0.25 * kk);
      for (int b = 0; b < 2; ++b) e[a] -= ka[a] * ka[b] / (2.0 * kz * kz) * v[b];
    }
    e[2] = -(ka[0] * v[0] + ka[1] * v[1]) / kz;
    // e_{3 g b}: +1 for (g,b) = (x,y), -1 for (y,x).
    const cplx curl_r = r.x * v[1] - r.y * v[0];
    const cplx curl_k = ka[0] * v[1] - ka[1] * v[0];
    e[2] += rot_coef * curl_r;
    for (int a = 0; a < 3; ++a) e[a] += rot_coef * xa[a] / kz * curl_k;
    return e;
  };

  const std::array<cplx, 2> pol_h = {-pol[1], pol[0]};  // e_{3 b a} psi_b
  out.samples.reserve(positions.size());
  for (const auto& r : positions) {
    const cplx fast = std::exp(i_unit * (kz * r.z)) *
                      std::exp(i_unit * (alpha * eta_phase(r.z, dp.l_z))) /
                      std::sqrt(2.0 * constants::pi);
    FieldSample fs;
    fs.position = r;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0.0) continue;
      const Vec2 kappa = state.k_perp + Vec2{basis[j].gx, basis[j].gy};
      const cplx amp = c[j] * std::exp(i_unit * (kappa.x * r.x + kappa.y * r.y)) * fast;
      const auto e = gauge(kappa, pol, r);
      const auto h = gauge(kappa, pol_h, r);
      for (int a = 0; a < 3; ++a) {
        fs.E[a] += z_half * amp * e[a];
        fs.H[a] += amp * h[a] / z_half;
      }
    }
    out.samples.push_back(fs);
  }
  return out;
}

}  // namespace czband
