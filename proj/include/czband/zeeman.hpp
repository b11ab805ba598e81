#pragma once

#include "czband/types.hpp"

namespace czband {

struct MPair {
  double plus = 0.0;
  double minus = 0.0;
  double total() const { return plus + minus; }
};

/// sinc(pi*sqrt(FF)), the normalised first Fourier harmonic of the pixel.
double pixel_sinc(double fill_factor);

/// Square-pixel closed form
///   M+- = 2 n l_z P^2 / (hbar m0 c FF dphi) * [s (1 +- s)]^-1,  s = sinc(pi sqrt FF).
/// Throws ValidationError when dphi == 0.
MPair m_closed_form(const LatticeSpec& lattice, const DerivedParams& dp);

struct Splittings {
  double delta_omega_S = 0.0;
  double delta_omega_L = 0.0;
};

/// dw_S = 2 Omega / n^2, dw_L = 2 (M+ + M-) Omega / n^2.
Splittings splittings(double m_plus, double m_minus, double n_refr, double omega_rot);

/// sqrt(<r^2>) = hbar sqrt((M+^2 + M-^2)/2) / P.
double spread_rms(double m_plus, double m_minus, double p_interband);

/// Ratio of the spread-based orbital splitting
///   2 pi sqrt(2 <r^2>) / (n^2 pitch) / (1 + s^2)
/// to 2M/n^2. Equals 1/sqrt(1+s^2) when M+- come from m_closed_form.
double consistency_ratio(const LatticeSpec& lattice, double m_plus, double m_minus, double n_refr);

struct ZeemanResult {
  double m_plus = 0.0;
  double m_minus = 0.0;
  double m_total = 0.0;
  double delta_omega_S_per_Omega = 0.0;
  double delta_omega_L_per_Omega = 0.0;
  double spread_rms = 0.0;  ///< m
  double sinc_s = 0.0;
  double consistency_ratio = 0.0;
};

/// Closed-form bundle used by parameter sweeps.
ZeemanResult analyze(const LatticeSpec& lattice);

/// n_eff = n + ((Omega x r)/c).tau + handedness (Omega.tau)/(omega0 n);
/// handedness +1 for left, -1 for right circular polarisation.
double effective_index(double n_refr, Vec3 omega_rot, Vec3 r, Vec3 tau, double omega0,
                       int handedness);

}  // namespace czband
