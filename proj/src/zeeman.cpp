#include "czband/zeeman.hpp"

#include <cmath>

#include "czband/constants.hpp"
#include "czband/error.hpp"
#include "czband/lattice.hpp"

namespace czband {

double pixel_sinc(double fill_factor) { return sinc(constants::pi * std::sqrt(fill_factor)); }

MPair m_closed_form(const LatticeSpec& lattice, const DerivedParams& dp) {
  if (lattice.dphi == 0.0)
    throw ValidationError("m_closed_form: dphi = 0 (empty lattice has no k.p model)", "dphi");
  if (!(lattice.fill_factor > 0.0 && lattice.fill_factor < 1.0))
    throw ValidationError("m_closed_form: fill_factor must lie in (0, 1)", "fill_factor");
  const double prefactor = 2.0 * dp.n_refr * dp.l_z * dp.p_interband * dp.p_interband /
                           (constants::hbar * dp.m0 * constants::c * lattice.fill_factor *
                            lattice.dphi);
  const double s = pixel_sinc(lattice.fill_factor);
  return {prefactor / (s * (1.0 + s)), prefactor / (s * (1.0 - s))};
}

Splittings splittings(double m_plus, double m_minus, double n_refr, double omega_rot) {
  const double per = omega_rot / (n_refr * n_refr);
  return {2.0 * per, 2.0 * (m_plus + m_minus) * per};
}

double spread_rms(double m_plus, double m_minus, double p_interband) {
  return constants::hbar * std::sqrt(0.5 * (m_plus * m_plus + m_minus * m_minus)) / p_interband;
}

double consistency_ratio(const LatticeSpec& lattice, double m_plus, double m_minus,
                         double n_refr) {
  const double p = constants::hbar * constants::pi / (std::sqrt(2.0) * lattice.pitch);
  const double r2 = spread_rms(m_plus, m_minus, p);
  const double s = pixel_sinc(lattice.fill_factor);
  const double n2 = n_refr * n_refr;
  const double from_spread =
      2.0 * constants::pi * std::sqrt(2.0 * r2 * r2) / (n2 * lattice.pitch) / (1.0 + s * s);
  const double from_m = 2.0 * (m_plus + m_minus) / n2;
  return from_spread / from_m;
}

ZeemanResult analyze(const LatticeSpec& lattice) {
  const auto dp = derive_params(lattice);
  const auto m = m_closed_form(lattice, dp);
  const auto per = splittings(m.plus, m.minus, lattice.n_refr, 1.0);
  ZeemanResult z;
  z.m_plus = m.plus;
  z.m_minus = m.minus;
  z.m_total = m.total();
  z.delta_omega_S_per_Omega = per.delta_omega_S;
  z.delta_omega_L_per_Omega = per.delta_omega_L;
  z.spread_rms = spread_rms(m.plus, m.minus, dp.p_interband);
  z.sinc_s = pixel_sinc(lattice.fill_factor);
  z.consistency_ratio = consistency_ratio(lattice, m.plus, m.minus, lattice.n_refr);
  return z;
}

double effective_index(double n_refr, Vec3 omega_rot, Vec3 r, Vec3 tau, double omega0,
                       int handedness) {
  const double sagnac = dot((1.0 / constants::c) * cross(omega_rot, r), tau);
  const double birefringence = handedness * dot(omega_rot, tau) / (omega0 * n_refr);
  return n_refr + sagnac + birefringence;
}

}  // namespace czband
