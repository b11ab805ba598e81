#include <cmath>

#include "czband/constants.hpp"
#include "czband/error.hpp"
#include "czband/types.hpp"

namespace czband {

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError(std::string(field) + ": " + message, field);
}

}  // namespace

std::vector<std::string> validate(const LatticeSpec& l) {
  require(std::isfinite(l.lambda_vac) && l.lambda_vac > 0, "lambda_vac", "must be > 0");
  require(std::isfinite(l.pitch) && l.pitch > 0, "pitch", "must be > 0");
  require(std::isfinite(l.n_refr) && l.n_refr >= 1, "n_refr", "must be >= 1");
  require(std::isfinite(l.fill_factor) && l.fill_factor > 0 && l.fill_factor < 1, "fill_factor",
          "must lie in (0, 1)");
  require(std::isfinite(l.dphi) && std::abs(l.dphi) <= 0.1, "dphi", "|dphi| must be <= 0.1");
  require(l.pitch * l.n_refr / l.lambda_vac >= 2, "pitch",
          "pitch*n/lambda must be >= 2 (pitch much longer than the cavity)");

  std::vector<std::string> warnings;
  if (std::abs(l.dphi) > 0.02)
    warnings.push_back("dphi: |dphi| > 0.02 is outside the low-contrast regime");
  if (l.dphi < 0)
    warnings.push_back("dphi: negative contrast gives negative M+-; not a demonstrated regime");
  return warnings;
}

double DerivedParams::kinetic_coefficient() const { return constants::hbar / (2.0 * m0); }

double DerivedParams::rest_frequency() const {
  return m0 * constants::c * constants::c / (n_refr * n_refr * constants::hbar);
}

DerivedParams derive_params(const LatticeSpec& l) {
  using constants::c;
  using constants::hbar;
  using constants::pi;
  validate(l);
  DerivedParams dp;
  dp.n_refr = l.n_refr;
  dp.k_z = 2.0 * pi * l.n_refr / l.lambda_vac;
  dp.l_z = l.lambda_vac / l.n_refr;
  dp.m0 = l.n_refr * hbar * dp.k_z / c;
  dp.p_interband = hbar * pi / (std::sqrt(2.0) * l.pitch);
  dp.omega0 = c * dp.k_z / l.n_refr;
  dp.v_prefactor = c / (2.0 * l.n_refr * dp.l_z);
  dp.mu = 1.0;
  dp.eps = l.n_refr * l.n_refr;
  dp.z_impedance = std::sqrt(dp.mu / dp.eps);
  return dp;
}

}  // namespace czband
