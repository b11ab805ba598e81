#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "czband/hermitian.hpp"
#include "czband/lattice.hpp"
#include "czband/types.hpp"

namespace czband {

// ---------------------------------------------------------------------------
// k-paths. Gamma=(0,0), Z=(pi/pitch,0), T=(pi/pitch,pi/pitch).

struct KPoint {
  Vec2 k;                 ///< rad/m, measured from Gamma
  double path_pos = 0.0;  ///< cumulative path length in units of pi/pitch
  std::string label;      ///< "G", "Z", "T" at vertices, empty elsewhere
};

/// Position of a named high-symmetry point ("G", "Z", "T", case-insensitive).
/// Throws ValidationError for an unknown name.
Vec2 high_symmetry_point(std::string_view name, double pitch);

/// Samples a colon-separated path such as "G:Z:T:G". Each segment gets
/// `samples_per_segment` intervals; vertices are shared between segments.
std::vector<KPoint> make_kpath(std::string_view spec, int samples_per_segment, double pitch);

// ---------------------------------------------------------------------------
// Plane-wave Hamiltonian and its eigenstates.

/// C4v representation of a scalar state at T.
enum class ScalarRep { T1, T4, T5, Unclassified };
std::string_view to_string(ScalarRep rep);

/// Scalar Bloch state u_{qk} expanded on the reciprocal basis. The expansion
/// is unit-norm in coefficient space; the cell-normalised amplitudes used for
/// the k.p basis functions differ by a factor 1/(2*pi).
struct BlochState {
  int band = 0;
  Vec2 k_perp;
  double omega = 0.0;     ///< rad/s
  double detuning = 0.0;  ///< omega - omega0, evaluated without the carrier offset
  std::vector<cplx> coefficients;
  std::shared_ptr<const std::vector<ReciprocalVector>> basis;  ///< waves behind coefficients
  int degeneracy = 2;     ///< spin x orbital multiplicity
  std::optional<ScalarRep> rep_label;
  double rep_projection = 0.0;
};

enum class EnergyFrame {
  Absolute,  ///< diagonal carries m0*c^2/(n^2*hbar)
  Detuning,  ///< rest term dropped, eigenvalues are omega - omega0
};

/// Plane-wave matrix of the rotation-free transverse Hamiltonian, in rad/s:
///   H(G',G) = delta(G',G) [rest + hbar|k+G|^2/(2 m0)] - v_prefactor * phi_{G'-G}
HermitianMatrix build_hamiltonian(const DerivedParams& dp, const PatternFourier& pf,
                                  std::span<const ReciprocalVector> basis, Vec2 k_perp,
                                  EnergyFrame frame = EnergyFrame::Absolute);

/// Degeneracy clustering tolerance for eigenvalues, rad/s.
inline constexpr double kDegeneracyTolerance = 1.0;

class OpwSolver {
 public:
  OpwSolver(const LatticeSpec& lattice, int basis_halfwidth);

  /// Lowest n_bands states at k_perp, ascending. The plane-wave window is
  /// centred on `anchor` (default: k_perp itself); finite-difference stencils
  /// pass a common anchor so that every point uses the same basis.
  /// Degeneracy counts use the full spectrum.
  std::vector<BlochState> solve(Vec2 k_perp, int n_bands,
                                std::optional<Vec2> anchor = std::nullopt) const;

  /// Window used for k (see reciprocal_basis_around).
  std::vector<ReciprocalVector> basis_at(Vec2 k) const;

  const LatticeSpec& lattice() const noexcept { return lattice_; }
  const DerivedParams& params() const noexcept { return params_; }
  const PatternFourier& fourier() const noexcept { return fourier_; }
  int basis_halfwidth() const noexcept { return halfwidth_; }
  Vec2 t_point() const;

 private:
  LatticeSpec lattice_;
  DerivedParams params_;
  int halfwidth_;
  PatternFourier fourier_;
};

struct BandPoint {
  KPoint kpoint;
  std::vector<BlochState> states;
};

struct BandStructure {
  std::vector<BandPoint> points;
  ExperimentConfig config;
  int n_bands = 0;
};

struct SolveOptions {
  int n_bands = 8;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Band structure along config.kpath. States at T carry representation
/// labels. Per-k solves run concurrently; output keeps path order.
BandStructure solve_bands(const ExperimentConfig& config, const SolveOptions& options = {});

// ---------------------------------------------------------------------------
// T-point analysis.

struct RepGroup {
  std::vector<int> bands;  ///< indices into the classified state list
  double detuning = 0.0;   ///< mean detuning of the group
};

/// Groups degenerate states at T, rotates each group onto the projections of
/// the symmetrised T plane waves (S; X, Y; XY) and labels every state. A state
/// whose best projection is below 0.5 is labelled Unclassified.
/// `states` must have been computed at exactly (pi/pitch, pi/pitch).
std::vector<RepGroup> classify_T_states(std::vector<BlochState>& states, double pitch);

/// Vector band edges at T: T5 <- scalar S edge, T1 <- scalar (X,Y) edge,
/// T5' <- scalar XY edge. Frequencies are kept as detunings from omega0 so
/// that edge differences keep full precision.
struct BandEdges {
  double omega0 = 0.0;
  double t5 = 0.0;
  double t1 = 0.0;
  double t5p = 0.0;

  double omega_T5() const { return omega0 + t5; }
  double omega_T1() const { return omega0 + t1; }
  double omega_T5p() const { return omega0 + t5p; }
};

/// Throws Error naming the labels found when T1, T5 or T4 is missing from
/// the lowest four states.
BandEdges band_edges(std::span<const BlochState> classified_states, double omega0);
/// Solves at T, classifies and extracts the edges.
BandEdges band_edges(const OpwSolver& solver);

/// Default finite-difference step for curvature at T: 1e-3 * pi/pitch.
double default_mass_step(double pitch);

/// Band mass at T from a Richardson-extrapolated (h, h/2) central second
/// difference along `direction`: 1/m = (1/hbar) d^2(hbar*omega)/dk^2.
/// `band` indexes the ascending spectrum at T and must be nondegenerate there.
/// Throws NumericalError if the band is degenerate at T or another band
/// crosses it inside the stencil.
double effective_mass_fd(const OpwSolver& solver, int band, Vec2 direction, double step = 0.0);

// ---------------------------------------------------------------------------
// Longitudinal factor and field reconstruction.

struct LongitudinalProfile {
  double alpha = 0.0;              ///< <psi|phi|psi>
  std::vector<double> z;           ///< uniform grid over [-l_z, l_z)
  std::vector<cplx> eta;           ///< eta(z) on the grid
};

/// Evaluates the per-reflection phase alpha and the periodic longitudinal
/// factor 1 + eta(z) = exp(i*alpha*[floor(z/2l_z) + 1/2 - z/(2 l_z)]).
LongitudinalProfile longitudinal_profile(const BlochState& state, const PatternFourier& pf,
                                         const DerivedParams& dp, int samples);

struct FieldSample {
  Vec3 position;
  std::array<cplx, 3> E{};
  std::array<cplx, 3> H{};
};

struct FieldReconstruction {
  std::vector<FieldSample> samples;
  double max_transverse_ratio = 0.0;  ///< max |k+G|/k_z over populated waves
  bool paraxial_warning = false;      ///< ratio above 0.2
};

/// Applies the paraxial gauge operator to psi = polarization * u * e^{ik.r}
/// plane wave by plane wave (d/dx -> i*kappa) and returns E, H at each
/// position, including the fast factor e^{i k_z z}(1+eta)/sqrt(2 pi) with
/// eta built from `alpha`. Rotation terms are first order in Omega.
FieldReconstruction reconstruct_fields(const BlochState& state, const DerivedParams& dp, const RotationSpec& rot,
                                       std::array<cplx, 2> polarization,
                                       std::span<const Vec3> positions, double alpha = 0.0);

}  // namespace czband
