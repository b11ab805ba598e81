#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "czband/config.hpp"
#include "czband/error.hpp"
#include "czband/kp.hpp"
#include "czband/lattice.hpp"
#include "czband/opw.hpp"
#include "czband/validate.hpp"
#include "czband/zeeman.hpp"

namespace py = pybind11;
using namespace czband;

namespace {

Vec2 to_vec2(const std::array<double, 2>& a) { return {a[0], a[1]}; }

py::dict state_dict(const BlochState& s) {
  py::dict d;
  d["band"] = s.band;
  d["omega"] = s.omega;
  d["detuning"] = s.detuning;
  d["degeneracy"] = s.degeneracy;
  d["rep_label"] = s.rep_label ? py::cast(std::string(to_string(*s.rep_label))) : py::none();
  d["coefficients"] = py::array_t<std::complex<double>>(s.coefficients.size(), s.coefficients.data());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Plane-wave, k.p and rotation-splitting solvers for patterned-mirror cavity arrays";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init([](double lambda_vac, double n_refr, double pitch, double fill_factor, double dphi) {
             LatticeSpec l{lambda_vac, n_refr, pitch, fill_factor, dphi};
             validate(l);
             return l;
           }),
           py::arg("lambda_vac"), py::arg("n_refr"), py::arg("pitch"), py::arg("fill_factor"),
           py::arg("dphi"))
      .def_readwrite("lambda_vac", &LatticeSpec::lambda_vac)
      .def_readwrite("n_refr", &LatticeSpec::n_refr)
      .def_readwrite("pitch", &LatticeSpec::pitch)
      .def_readwrite("fill_factor", &LatticeSpec::fill_factor)
      .def_readwrite("dphi", &LatticeSpec::dphi)
      .def("__repr__", [](const LatticeSpec& l) {
        return "LatticeSpec(lambda_vac=" + std::to_string(l.lambda_vac) + ", n_refr=" +
               std::to_string(l.n_refr) + ", pitch=" + std::to_string(l.pitch) +
               ", fill_factor=" + std::to_string(l.fill_factor) + ", dphi=" + std::to_string(l.dphi) + ")";
      });

  py::class_<DerivedParams>(m, "DerivedParams")
      .def_readonly("k_z", &DerivedParams::k_z)
      .def_readonly("l_z", &DerivedParams::l_z)
      .def_readonly("m0", &DerivedParams::m0)
      .def_readonly("p_interband", &DerivedParams::p_interband)
      .def_readonly("omega0", &DerivedParams::omega0)
      .def_readonly("v_prefactor", &DerivedParams::v_prefactor)
      .def_readonly("z_impedance", &DerivedParams::z_impedance);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("lattice", &ExperimentConfig::lattice)
      .def_property_readonly("omega_rot", [](const ExperimentConfig& c) { return c.rotation.omega_z; })
      .def_readonly("basis_halfwidth", &ExperimentConfig::basis_halfwidth)
      .def_readonly("kpath", &ExperimentConfig::kpath)
      .def_readonly("samples_per_segment", &ExperimentConfig::samples_per_segment)
      .def_readonly("warnings", &ExperimentConfig::warnings);

  m.def("derive_params", &derive_params, py::arg("lattice"));
  m.def("load_config", [](const std::string& text) { return load_config(text); }, py::arg("text"));
  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("fourier_coefficient", &fourier_coefficient, py::arg("lattice"), py::arg("m"), py::arg("n"));

  py::class_<OpwSolver>(m, "OpwSolver")
      .def(py::init<const LatticeSpec&, int>(), py::arg("lattice"), py::arg("basis_halfwidth") = 7)
      .def(
          "solve",
          [](const OpwSolver& s, std::array<double, 2> k, int n_bands) {
            py::list out;
            for (const auto& st : s.solve(to_vec2(k), n_bands)) out.append(state_dict(st));
            return out;
          },
          py::arg("k"), py::arg("n_bands") = 8)
      .def_property_readonly("t_point", [](const OpwSolver& s) {
        const Vec2 t = s.t_point();
        return std::array<double, 2>{t.x, t.y};
      });

  py::class_<BandEdges>(m, "BandEdges")
      .def_readonly("omega0", &BandEdges::omega0)
      .def_readonly("t5", &BandEdges::t5)
      .def_readonly("t1", &BandEdges::t1)
      .def_readonly("t5p", &BandEdges::t5p);

  m.def("band_edges", [](const OpwSolver& s) { return band_edges(s); }, py::arg("solver"),
        "Scalar T edges as detunings from omega0 (rad/s).");
  m.def(
      "effective_mass",
      [](const OpwSolver& s, int band, std::array<double, 2> direction) {
        return effective_mass_fd(s, band, to_vec2(direction));
      },
      py::arg("solver"), py::arg("band"), py::arg("direction") = std::array<double, 2>{1.0, 0.0});

  m.def(
      "solve_bands",
      [](const ExperimentConfig& config, int n_bands, unsigned threads) {
        const auto bs = solve_bands(config, {.n_bands = n_bands, .threads = threads});
        const auto nk = static_cast<py::ssize_t>(bs.points.size());
        py::array_t<double> path_pos(nk), k({nk, py::ssize_t{2}}), omega({nk, py::ssize_t{n_bands}}),
            detuning({nk, py::ssize_t{n_bands}});
        auto pp = path_pos.mutable_unchecked<1>();
        auto kk = k.mutable_unchecked<2>();
        auto om = omega.mutable_unchecked<2>();
        auto dt = detuning.mutable_unchecked<2>();
        for (py::ssize_t i = 0; i < nk; ++i) {
          const auto& p = bs.points[i];
          pp(i) = p.kpoint.path_pos;
          kk(i, 0) = p.kpoint.k.x;
          kk(i, 1) = p.kpoint.k.y;
          for (py::ssize_t b = 0; b < n_bands; ++b) {
            om(i, b) = p.states[b].omega;
            dt(i, b) = p.states[b].detuning;
          }
        }
        py::dict d;
        d["path_pos"] = path_pos;
        d["k"] = k;
        d["omega"] = omega;
        d["detuning"] = detuning;
        return d;
      },
      py::arg("config"), py::arg("n_bands") = 8, py::arg("threads") = 0u);

  py::class_<KpModel>(m, "KpModel")
      .def_readonly("omega_ref", &KpModel::omega_ref)
      .def_readonly("edge_T5", &KpModel::edge_T5)
      .def_readonly("edge_T1", &KpModel::edge_T1)
      .def_readonly("edge_T5p", &KpModel::edge_T5p)
      .def_readonly("m_plus", &KpModel::m_plus)
      .def_readonly("m_minus", &KpModel::m_minus);

  m.def(
      "kp_model",
      [](const OpwSolver& s, const std::string& masses) {
        const auto edges = band_edges(s);
        if (masses == "closed_form") return kp_from_opw(edges, s.lattice(), ClosedFormSource{});
        if (masses == "fsum")
          return kp_from_opw(edges, s.lattice(), manifold_fsum_masses(edges, s.params()));
        throw ValidationError("masses: expected 'closed_form' or 'fsum'", "masses");
      },
      py::arg("solver"), py::arg("masses") = "closed_form");
  m.def(
      "kp_bands",
      [](const KpModel& model, const std::vector<std::array<double, 2>>& qs, double omega_rot) {
        std::vector<Vec2> q;
        for (const auto& a : qs) q.push_back(to_vec2(a));
        const auto spec = kp_bands(model, q, RotationSpec{omega_rot});
        py::array_t<double> offsets({static_cast<py::ssize_t>(q.size()), py::ssize_t{8}});
        auto o = offsets.mutable_unchecked<2>();
        for (std::size_t i = 0; i < spec.size(); ++i)
          for (std::size_t j = 0; j < 8; ++j) o(i, j) = spec[i].levels[j].offset;
        return offsets;
      },
      py::arg("model"), py::arg("q"), py::arg("omega_rot") = 0.0,
      "Level offsets from omega_ref, upper block then lower block, each ascending.");
  m.def(
      "zeeman_splittings",
      [](const KpModel& model, double omega_rot) {
        const auto s = zeeman_splittings_at_T(model, RotationSpec{omega_rot});
        return std::pair{s.delta_omega_S, s.delta_omega_L};
      },
      py::arg("model"), py::arg("omega_rot"));

  m.def(
      "m_closed_form",
      [](const LatticeSpec& l) {
        const auto mp = m_closed_form(l, derive_params(l));
        return std::pair{mp.plus, mp.minus};
      },
      py::arg("lattice"));
  m.def(
      "splittings",
      [](double m_plus, double m_minus, double n, double omega_rot) {
        const auto s = splittings(m_plus, m_minus, n, omega_rot);
        return std::pair{s.delta_omega_S, s.delta_omega_L};
      },
      py::arg("m_plus"), py::arg("m_minus"), py::arg("n_refr"), py::arg("omega_rot"));
  m.def("consistency_ratio", &consistency_ratio, py::arg("lattice"), py::arg("m_plus"),
        py::arg("m_minus"), py::arg("n_refr"));
  m.def(
      "analyze",
      [](const LatticeSpec& l) {
        const auto r = analyze(l);
        py::dict d;
        d["m_plus"] = r.m_plus;
        d["m_minus"] = r.m_minus;
        d["m_total"] = r.m_total;
        d["dwS_over_Omega"] = r.delta_omega_S_per_Omega;
        d["dwL_over_Omega"] = r.delta_omega_L_per_Omega;
        d["spread_rms"] = r.spread_rms;
        d["sinc_s"] = r.sinc_s;
        d["consistency_ratio"] = r.consistency_ratio;
        return d;
      },
      py::arg("lattice"));
  m.def(
      "effective_index",
      [](double n, std::array<double, 3> omega, std::array<double, 3> r, std::array<double, 3> tau,
         double omega0, int handedness) {
        return effective_index(n, {omega[0], omega[1], omega[2]}, {r[0], r[1], r[2]},
                               {tau[0], tau[1], tau[2]}, omega0, handedness);
      },
      py::arg("n_refr"), py::arg("omega_rot"), py::arg("r"), py::arg("tau"), py::arg("omega0"),
      py::arg("handedness"));

  m.def(
      "validate",
      [](const ExperimentConfig& config) {
        const auto report = run_validation(config);
        py::dict out;
        for (const auto& c : report.checks) {
          py::dict d;
          static constexpr const char* names[] = {"pass", "fail", "warn", "skip"};
          d["status"] = names[static_cast<int>(c.status)];
          d["required"] = c.required;
          d["value"] = c.value;
          d["threshold"] = c.threshold;
          d["detail"] = c.detail;
          out[py::str(c.name)] = d;
        }
        return py::make_tuple(report.ok(), out);
      },
      py::arg("config"), "Runs the cross-validation checks; returns (ok, checks).");
}
