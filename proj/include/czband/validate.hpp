#pragma once

#include <string>
#include <vector>

#include "czband/kp.hpp"
#include "czband/opw.hpp"
#include "czband/types.hpp"

namespace czband {

// Diagnostics shared by the `validate` command and the test suites.

/// Worst deviation between the eight k.p levels and the spin-doubled lowest
/// four OPW bands along T->Z and T->Gamma for |k - T| <= radius_fraction*pi/pitch,
/// as a fraction of the eight-band span at T. The k.p model is taken at
/// Omega = 0.
struct Agreement {
  double worst_fraction = 0.0;
  double span = 0.0;  ///< rad/s
  int points = 0;
};
Agreement kp_opw_agreement(const OpwSolver& solver, const KpModel& model,
                           double radius_fraction = 0.25, int samples_per_leg = 10);

/// Clustering of the lowest `count` scalar levels at T.
struct Multiplicities {
  std::vector<int> groups;       ///< multiplicity of each group, ascending
  double max_spread = 0.0;       ///< largest in-group spread, rad/s
  double min_gap = 0.0;          ///< smallest gap between groups, rad/s
};
Multiplicities t_point_multiplicities(const OpwSolver& solver, int count = 4);

/// M+- from OPW curvature at T (S and XY bands) against the closed form.
struct MassComparison {
  double m_plus_opw = 0.0;
  double m_minus_opw = 0.0;
  double m_plus_closed = 0.0;
  double m_minus_closed = 0.0;
  double deviation_plus = 0.0;   ///< |opw/closed - 1|
  double deviation_minus = 0.0;
};
MassComparison compare_masses(const OpwSolver& solver);

/// Relative error of the k.p finite-difference masses against
/// m0/(1 - 2M+) and m0/(1 + 2M-). step = 0 selects 1e-4*pi/pitch.
struct FsumRoundTrip {
  double error_T5 = 0.0;
  double error_T5p = 0.0;
  double step = 0.0;  ///< rad/m
};
FsumRoundTrip fsum_round_trip(const KpModel& model, double step = 0.0);

/// 1e-4*pi/pitch, reduced to 1e-2 of the momentum m0*gap/P at which the
/// smallest T gap stops the bands from being parabolic. Weak patterns
/// (small gaps) need the reduction to keep the quartic stencil error down.
double kp_mass_step(const KpModel& model);

/// Max |fourier_coefficient - quadrature| for |m|, |n| <= reach, using
/// composite Gauss-Legendre on the smooth pieces of the pattern.
double fourier_quadrature_error(const LatticeSpec& lattice, int reach);

/// Max relative change of the T band edges when the basis grows from
/// `halfwidth` to `halfwidth + 2`.
double edge_convergence(const LatticeSpec& lattice, int halfwidth);

enum class CheckStatus { Pass, Fail, Warn, Skip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  bool required = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  /// True when no required check failed.
  bool ok() const;
  std::string text() const;
  std::string json() const;
};

ValidationReport run_validation(const ExperimentConfig& config, unsigned threads = 0);

}  // namespace czband
