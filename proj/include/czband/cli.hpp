#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "czband/kp.hpp"
#include "czband/opw.hpp"
#include "czband/types.hpp"

namespace czband {

// Table builders behind the command-line front end. They are kept separate
// from argument parsing so that tests can drive them directly.

/// OPW band CSV:
/// k_index,path_pos,kx,ky,band,degeneracy,omega_rad_s,detuning_GHz,rep_label
void write_opw_csv(std::ostream& out, const BandStructure& bands);

/// k.p levels along a k-path, measured from T.
struct KpPathPoint {
  KPoint kpoint;
  std::vector<KpLevel> levels;  ///< all eight levels, ascending
  bool extrapolated = false;    ///< |k - T| beyond the validity radius
};
std::vector<KpPathPoint> kp_path(const KpModel& model, std::span<const KPoint> path,
                                 const RotationSpec& rot);

/// Same columns as the OPW CSV plus `block` (+1 upper, -1 lower). rep_label
/// names the band-edge state at T and reads "extrapolated" outside the
/// validity window.
void write_kp_csv(std::ostream& out, std::span<const KpPathPoint> points);

/// Per-k, per-level comparison of the k.p levels with the spin-doubled OPW
/// bands. Returns the largest diff_over_span among rows with
/// |k - T| <= 0.25*pi/pitch.
double write_diff_csv(std::ostream& out, const KpModel& model, const BandStructure& bands,
                      std::span<const KpPathPoint> points);

/// Fourier table (m, n, value) for |m|, |n| <= reach.
void write_fourier_csv(std::ostream& out, const LatticeSpec& lattice, int reach);

struct SplitRow {
  double omega = 0.0;
  double dws_kp = 0.0;
  double dwl_kp = 0.0;
  double dws_formula = 0.0;
  double dwl_formula = 0.0;
  double rel_diff = 0.0;  ///< max relative kp-vs-formula difference, 0 when Omega = 0
};
std::vector<SplitRow> split_table(const ExperimentConfig& config, std::span<const double> omegas);
void write_split_csv(std::ostream& out, std::span<const SplitRow> rows);

enum class SweepParam { Dphi, Pitch, FillFactor };

struct SweepSpec {
  SweepParam param = SweepParam::Dphi;
  double from = 0.0;  ///< SI units (pitch in metres)
  double to = 0.0;
  int points = 2;
  bool log = false;
};

/// Lattices along the sweep. Every point is validated before any is
/// returned; the first offending value raises ValidationError.
std::vector<LatticeSpec> sweep_lattices(const LatticeSpec& base, const SweepSpec& spec);

/// dphi,pitch_um,M_plus,M_minus,M,dwL_over_Omega,dwS_over_Omega,spread_rms_mm,consistency_ratio,ff
void write_sweep_csv(std::ostream& out, std::span<const LatticeSpec> lattices, unsigned threads = 0);

/// gnuplot script for a band CSV (and optionally its k.p companion).
std::string band_plot_script(const std::string& opw_csv, const std::string& kp_csv);

/// Full command-line entry point. Exit codes: 0 success, 1 computation or
/// check failure, 2 usage or configuration error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace czband
