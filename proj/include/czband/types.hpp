#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace czband {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
  friend constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  }
};

/// Physical description of the patterned Fabry-Perot cavity. SI units.
struct LatticeSpec {
  double lambda_vac = 0.0;   ///< vacuum wavelength, m
  double n_refr = 1.0;       ///< refractive index inside the cavity
  double pitch = 0.0;        ///< lattice period, m
  double fill_factor = 0.0;  ///< pixel area / unit-cell area
  double dphi = 0.0;         ///< phase contrast of the mirror pattern
};

/// Checks the LatticeSpec invariants. Throws ValidationError on a hard
/// violation and returns soft warnings (e.g. contrast above 0.02).
std::vector<std::string> validate(const LatticeSpec& lattice);

/// Constants derived from a LatticeSpec. Frequencies in rad/s.
struct DerivedParams {
  double k_z = 0.0;          ///< longitudinal wavenumber 2*pi*n/lambda
  double l_z = 0.0;          ///< cavity length lambda/n
  double m0 = 0.0;           ///< photon mass n*hbar*k_z/c
  double p_interband = 0.0;  ///< interband momentum hbar*pi/(sqrt(2)*pitch)
  double omega0 = 0.0;       ///< carrier frequency c*k_z/n
  double v_prefactor = 0.0;  ///< well depth per unit phase c/(2*n*l_z)
  double z_impedance = 0.0;  ///< relative impedance sqrt(mu/eps)
  double eps = 0.0;
  double mu = 0.0;
  double n_refr = 0.0;

  /// hbar/(2*m0): converts |k|^2 to a kinetic frequency.
  double kinetic_coefficient() const;
  /// m0*c^2/(n^2*hbar), the rest term of the transverse Hamiltonian.
  double rest_frequency() const;
};

DerivedParams derive_params(const LatticeSpec& lattice);

/// Rigid rotation of the cavity about its axis.
struct RotationSpec {
  double omega_z = 0.0;  ///< rad/s
};

struct ExperimentConfig {
  LatticeSpec lattice;
  RotationSpec rotation;
  int basis_halfwidth = 7;
  std::string kpath = "G:Z:T:G";
  int samples_per_segment = 40;
  std::vector<std::string> warnings;
};

}  // namespace czband
