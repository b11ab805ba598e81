// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "czband/cli.hpp"
#include "czband/kp.hpp"
#include "czband/lattice.hpp"
#include "czband/opw.hpp"
#include "czband/validate.hpp"
#include "czband/zeeman.hpp"

using namespace czband;

namespace {

constexpr double kPi = 3.14159265358979323846;

LatticeSpec strong() { return {960e-9, 3.53, 4e-6, 0.65, 0.02}; }
LatticeSpec weak() { return {960e-9, 3.53, 4e-6, 0.65, 1e-4}; }

int failures = 0;
std::chrono::steady_clock::time_point started;

void report(int id, const char* name, bool ok, const std::string& detail) {
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("[%s] %2d %-30s %s [%.2f s]\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const char* name, F&& body) {
  started = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}
std::string fmt(const char* f, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

int main() {
  criterion(1, "kp/OPW band agreement", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto l = strong();
    const OpwSolver solver(l, 7);
    const auto model = kp_from_opw(band_edges(solver), l, ClosedFormSource{});
    const auto a = kp_opw_agreement(solver, model, 0.25, 10);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, "kp/OPW band agreement", a.worst_fraction <= 0.05 && secs <= 10.0,
           fmt("worst %.3g of span (limit 0.05) over %g k-points, %.2f s (limit 10 s)", a.worst_fraction,
               a.points, secs));
  });

  criterion(2, "T-point degeneracy", [] {
    bool ok = true;
    std::string detail;
    for (const double dphi : {1e-4, 0.02}) {
      auto l = strong();
      l.dphi = dphi;
      const OpwSolver solver(l, 7);
      const auto m = t_point_multiplicities(solver, 4);
      const auto states = solver.solve(solver.t_point(), 4);
      const bool vec = states[0].degeneracy == 2 && states[1].degeneracy == 4 && states[2].degeneracy == 4 &&
                       states[3].degeneracy == 2;
      const bool this_ok = m.groups == std::vector<int>{1, 2, 1} && m.max_spread <= 1.0 && m.min_gap >= 1e6 && vec;
      ok = ok && this_ok;
      detail += fmt("dphi=%g: {%g,", dphi, m.groups.size() > 0 ? m.groups[0] : 0);
      detail += fmt("%g,%g}", m.groups.size() > 1 ? m.groups[1] : 0, m.groups.size() > 2 ? m.groups[2] : 0);
      detail += fmt(" spread %.2g rad/s gap %.3g rad/s; ", m.max_spread, m.min_gap);
    }
    report(2, "T-point degeneracy", ok, detail + "vector {2,4,2}");
  });

  criterion(3, "spin splitting 2/n^2", [] {
    const auto l = strong();
    const auto model = kp_from_opw(band_edges(OpwSolver(l, 7)), l, ClosedFormSource{});
    const double want = 2.0 / (3.53 * 3.53);
    double worst = 0.0;
    for (const double w : {1.0, 1e3, 1e6}) {
      const auto s = zeeman_splittings_at_T(model, RotationSpec{w});
      worst = std::max(worst, std::abs(s.delta_omega_S / w / want - 1.0));
    }
    report(3, "spin splitting 2/n^2", worst <= 1e-12 && std::abs(want / 0.160503 - 1.0) < 1e-5,
           fmt("dw_S/Omega = %.6f, worst relative error %.2g (limit 1e-12)", want, worst));
  });

  criterion(4, "orbital enhancement M", [] {
    using big = boost::multiprecision::cpp_dec_float_50;
    // Closed form rewritten in wavelength units, evaluated at 50 digits.
    const big pi = boost::math::constants::pi<big>();
    const big lambda("960e-9"), n("3.53"), pitch("4e-6"), ff("0.65"), dphi("1e-4");
    const big x = pi * sqrt(ff);
    const big s = sin(x) / x;
    const big pre = lambda * lambda * pi / (2 * n * n * pitch * pitch * ff * dphi);
    const big m_oracle = pre / (s * (1 + s)) + pre / (s * (1 - s));
    const auto l = weak();
    const double m = m_closed_form(l, derive_params(l)).total();
    const double oracle = m_oracle.convert_to<double>();
    const double dev = std::abs(m / oracle - 1.0);
    const bool ok = dev <= 1e-12 && std::abs(m / 1.04e3 - 1.0) <= 0.02 && m > 1e3;
    report(4, "orbital enhancement M", ok,
           fmt("M = %.6g (oracle %.6g, rel dev %.2g); within 2%% of 1.04e3 and > 1e3", m, oracle, dev));
  });

  criterion(5, "f-sum round trip", [] {
    const auto l = strong();
    const OpwSolver solver(l, 7);
    const auto edges = band_edges(solver);
    const auto model = kp_from_opw(edges, l, manifold_fsum_masses(edges, solver.params()));
    const auto r = fsum_round_trip(model, 1e-4 * kPi / l.pitch);
    const double worst = std::max(r.error_T5, r.error_T5p);
    report(5, "f-sum round trip", worst <= 1e-6,
           fmt("T5 %.2g, T5' %.2g relative (limit 1e-6), step 1e-4 pi/pitch", r.error_T5, r.error_T5p));
  });

  criterion(6, "closed form vs OPW masses", [] {
    const OpwSolver solver(weak(), 7);
    const auto c = compare_masses(solver);
    const bool ok = c.deviation_plus <= 0.25 && c.deviation_minus <= 0.25;
    report(6, "closed form vs OPW masses", ok,
           fmt("M+ %.4g vs %.4g, ", c.m_plus_opw, c.m_plus_closed) +
               fmt("M- %.4g vs %.4g; ", c.m_minus_opw, c.m_minus_closed) +
               fmt("deviations %.3g, %.3g (limit 0.25)", c.deviation_plus, c.deviation_minus));
  });

  criterion(7, "Fourier vs adaptive quadrature", [] {
    using boost::math::quadrature::gauss_kronrod;
    const auto l = strong();
    const double p = l.pitch;
    // Cell coordinates u = x/pitch keep the integrals O(1) for the adaptive error control.
    const double a = 0.5 * std::sqrt(l.fill_factor);
    const double cuts[] = {-0.5, -a, a, 0.5};
    double worst = 0.0;
    for (int m = -5; m <= 5; ++m)
      for (int n = -5; n <= 5; ++n) {
        const double gx = 2.0 * kPi * m, gy = 2.0 * kPi * n;
        double total = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            total += gauss_kronrod<double, 31>::integrate(
                [&](double y) {
                  return gauss_kronrod<double, 31>::integrate(
                      [&](double x) { return phase_pattern(l, x * p, y * p) * std::cos(gx * x + gy * y); },
                      cuts[i], cuts[i + 1], 6, 1e-12);
                },
                cuts[j], cuts[j + 1], 6, 1e-12);
        worst = std::max(worst, std::abs(total - fourier_coefficient(l, m, n)));
      }
    report(7, "Fourier vs adaptive quadrature", worst <= 1e-10,
           fmt("max |analytic - quadrature| = %.2g for |m|,|n| <= 5 (limit 1e-10)", worst));
  });

  criterion(8, "longitudinal factor", [] {
    const auto l = strong();
    const OpwSolver solver(l, 7);
    const auto ground = solver.solve({0.0, 0.0}, 1).front();
    const auto prof = longitudinal_profile(ground, solver.fourier(), solver.params(), 1024);
    double worst = 0.0;
    for (const auto& e : prof.eta) worst = std::max(worst, std::abs(std::abs(1.0 + e) - 1.0));
    const double lo = l.dphi * l.fill_factor;
    const bool ok = worst <= 1e-12 && prof.alpha > lo && prof.alpha < l.dphi;
    report(8, "longitudinal factor", ok,
           fmt("max ||1+eta|-1| = %.2g; alpha = %.6g in (%.4g, ", worst, prof.alpha, lo) +
               fmt("%.4g)", l.dphi));
  });

  criterion(9, "splitting linearity", [] {
    ExperimentConfig cfg;
    cfg.lattice = weak();
    const std::vector<double> omegas = {1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6};
    const auto rows = split_table(cfg, omegas);
    auto columns = [](const SplitRow& r) {
      return std::array<double, 4>{r.dws_kp, r.dwl_kp, r.dws_formula, r.dwl_formula};
    };
    const auto first = columns(rows.front());
    const auto last = columns(rows.back());
    const double span = rows.back().omega - rows.front().omega;
    double worst = 0.0, worst_diff = 0.0;
    for (const auto& r : rows) {
      const auto vals = columns(r);
      for (std::size_t c = 0; c < 4; ++c) {
        const double slope = (last[c] - first[c]) / span;
        const double predicted = first[c] + slope * (r.omega - rows.front().omega);
        worst = std::max(worst, std::abs(vals[c] / predicted - 1.0));
      }
      worst_diff = std::max(worst_diff, r.rel_diff);
    }
    report(9, "splitting linearity", worst <= 1e-10 && worst_diff <= 1e-10,
           fmt("max residual from two-point slope %.2g, k.p vs formula %.2g (limit 1e-10)", worst, worst_diff));
  });

  criterion(10, "consistency ratio", [] {
    const auto l = weak();
    const auto m = m_closed_form(l, derive_params(l));
    const double ratio = consistency_ratio(l, m.plus, m.minus, l.n_refr);
    const double x = kPi * std::sqrt(0.65);
    const double s = std::sin(x) / x;
    const double want = 1.0 / std::sqrt(1.0 + s * s);
    const double dev = std::abs(ratio - want);
    report(10, "consistency ratio", dev <= 1e-10,
           fmt("R2/R1 = %.6f, 1/sqrt(1+s^2) = %.6f, |diff| %.2g (limit 1e-10)", ratio, want, dev));
  });

  criterion(11, "effective index", [] {
    const auto dp = derive_params(strong());
    const Vec3 z{0.0, 0.0, 1.0};
    const double still = effective_index(3.53, {}, {}, z, dp.omega0, +1);
    const double shift = effective_index(3.53, {0.0, 0.0, 1e3}, {}, z, dp.omega0, +1) - 3.53;
    const bool ok = still == 3.53 && std::abs(shift - 1.44e-13) <= 1e-15;
    report(11, "effective index", ok,
           fmt("n_eff(0) - n = %g; circular term %.4g (target 1.44e-13 +- 1e-15)", still - 3.53, shift));
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
