#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "czband/hermitian.hpp"
#include "czband/opw.hpp"
#include "czband/types.hpp"

namespace czband {

/// Parameters of the 8x8 block-diagonal k.p Hamiltonian at T. Edges are held
/// as offsets from omega_ref so that splittings keep full precision.
struct KpModel {
  double omega_ref = 0.0;
  double edge_T5 = 0.0;
  double edge_T1 = 0.0;
  double edge_T5p = 0.0;
  double p_interband = 0.0;
  double m_plus = 0.0;
  double m_minus = 0.0;
  double m0 = 0.0;
  double n_refr = 1.0;
  double pitch = 0.0;

  double omega_T5() const { return omega_ref + edge_T5; }
  double omega_T1() const { return omega_ref + edge_T1; }
  double omega_T5p() const { return omega_ref + edge_T5p; }
  double m_total() const { return m_plus + m_minus; }
};

/// M+- from the square-pixel closed form.
struct ClosedFormSource {};
/// M+- from band masses: M+ = -(m0/m_T5 - 1)/2, M- = (m0/m_T5p - 1)/2.
struct MassSource {
  double m_T5 = 0.0;
  double m_T5p = 0.0;
};
using KpSource = std::variant<ClosedFormSource, MassSource>;

/// Throws Error when the edges are not strictly ordered T5 < T1 < T5'.
KpModel kp_from_opw(const BandEdges& edges, const LatticeSpec& lattice, const KpSource& source);

/// Band masses of T5 and T5' implied by the f-sum rule restricted to the
/// eight-state manifold: m0/m_T5 = 1 - 4P^2/(hbar m0 (w_T1 - w_T5)) and
/// m0/m_T5' = 1 + 4P^2/(hbar m0 (w_T5' - w_T1)).
MassSource manifold_fsum_masses(const BandEdges& edges, const DerivedParams& dp);

struct KpBlocks {
  HermitianMatrix upper;
  HermitianMatrix lower;
};

/// Blocks in rad/s, basis (T5'+-, T1-+iT2, T3+-iT4, T5+-). `q` is measured
/// from T. `subtract` is removed from the diagonal (0 gives absolute values).
///   upper = H_0 + H_kp  + H_Omega  + hbar q^2/(2 m0)
///   lower = H_0 + H_kp* - H_Omega* + hbar q^2/(2 m0)
/// The lower block lives on the complex-conjugate basis, so both k.p and
/// rotation terms enter conjugated; eig(upper(q, W)) == eig(lower(q, -W)).
KpBlocks build_kp_hamiltonian(const KpModel& model, Vec2 q, const RotationSpec& rot,
                              double subtract = 0.0);

/// Validity window of the expansion, |q| <= 0.5*pi/pitch.
double kp_validity_radius(double pitch);

struct KpLevel {
  double omega = 0.0;   ///< rad/s
  double offset = 0.0;  ///< omega - model.omega_ref at full precision
  int block = +1;       ///< +1 upper, -1 lower
  std::array<cplx, 4> vector{};
};

struct KpPoint {
  Vec2 q;
  std::vector<KpLevel> levels;  ///< upper block ascending, then lower block ascending
};

using KpSpectrum = std::vector<KpPoint>;

KpSpectrum kp_bands(const KpModel& model, std::span<const Vec2> qs, const RotationSpec& rot);

/// Levels at q = 0. H_Omega commutes with H_0 there, so each block is
/// diagonalised inside the H_0 eigenspaces and the rotation shift is kept
/// separate from the edge. Entry i is the level grown from basis state i.
struct KpCentreLevel {
  double edge = 0.0;   ///< offset of the H_0 edge from omega_ref
  double shift = 0.0;  ///< rotation shift, rad/s
};
struct KpCentre {
  std::array<KpCentreLevel, 4> upper{};
  std::array<KpCentreLevel, 4> lower{};
};
KpCentre kp_levels_at_T(const KpModel& model, const RotationSpec& rot);

struct ZeemanSplitting {
  double delta_omega_S = 0.0;  ///< rad/s
  double delta_omega_L = 0.0;  ///< rad/s
};

/// Spin splitting from the T5 pair and orbital splitting inside the T1-T4
/// manifold, read off the q = 0 levels of both blocks.
ZeemanSplitting zeeman_splittings_at_T(const KpModel& model, const RotationSpec& rot);

enum class KpBranch { T5, T5p };

/// Mass of the T5 (lowest) or T5' (highest) branch of the upper block at
/// Omega = 0 from the same Richardson-extrapolated stencil as the plane-wave
/// route. Default step 1e-4*pi/pitch needs the pitch, so it is explicit here.
double kp_effective_mass_fd(const KpModel& model, KpBranch branch, Vec2 direction, double step);

}  // namespace czband
