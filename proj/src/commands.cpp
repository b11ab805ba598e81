#include "czband/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "czband/config.hpp"
#include "czband/constants.hpp"
#include "czband/csv.hpp"
#include "czband/error.hpp"
#include "czband/lattice.hpp"
#include "czband/parallel.hpp"
#include "czband/validate.hpp"
#include "czband/zeeman.hpp"

namespace czband {

namespace {

constexpr double kGHz = 2.0 * constants::pi * 1e9;

std::string_view kp_edge_name(std::size_t basis_index) {
  static constexpr std::string_view names[] = {"T5'", "T1-T4", "T1-T4", "T5"};
  return names[basis_index];
}

std::size_t dominant_component(const std::array<cplx, 4>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::norm(v[i]) > std::norm(v[best])) best = i;
  return best;
}

}  // namespace

void write_opw_csv(std::ostream& out, const BandStructure& bands) {
  csv::Writer w(out);
  w.header({"k_index", "path_pos", "kx", "ky", "band", "degeneracy", "omega_rad_s", "detuning_GHz",
            "rep_label"});
  for (std::size_t i = 0; i < bands.points.size(); ++i) {
    const auto& p = bands.points[i];
    for (const auto& s : p.states) {
      w.field(i).field(p.kpoint.path_pos).field(p.kpoint.k.x).field(p.kpoint.k.y).field(s.band);
      w.field(s.degeneracy).field(s.omega).field(s.detuning / kGHz);
      w.field(s.rep_label ? to_string(*s.rep_label) : std::string_view{});
      w.end_row();
    }
  }
}

std::vector<KpPathPoint> kp_path(const KpModel& model, std::span<const KPoint> path,
                                 const RotationSpec& rot) {
  const Vec2 t{constants::pi / model.pitch, constants::pi / model.pitch};
  const double radius = kp_validity_radius(model.pitch);
  std::vector<Vec2> qs;
  qs.reserve(path.size());
  for (const auto& kp : path) qs.push_back(kp.k - t);
  auto spectrum = kp_bands(model, qs, rot);

  std::vector<KpPathPoint> points(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    points[i].kpoint = path[i];
    points[i].levels = std::move(spectrum[i].levels);
    std::stable_sort(points[i].levels.begin(), points[i].levels.end(),
                     [](const KpLevel& a, const KpLevel& b) { return a.offset < b.offset; });
    points[i].extrapolated = qs[i].norm() > radius * (1.0 + 1e-12);
  }
  return points;
}

void write_kp_csv(std::ostream& out, std::span<const KpPathPoint> points) {
  csv::Writer w(out);
  w.header({"k_index", "path_pos", "kx", "ky", "band", "degeneracy", "omega_rad_s", "detuning_GHz",
            "rep_label", "block"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const bool at_t = p.kpoint.label == "T";
    for (std::size_t b = 0; b < p.levels.size(); ++b) {
      const auto& l = p.levels[b];
      int degeneracy = 0;
      for (const auto& o : p.levels)
        if (std::abs(o.offset - l.offset) <= kDegeneracyTolerance) ++degeneracy;
      std::string_view label;
      if (at_t) label = kp_edge_name(dominant_component(l.vector));
      else if (p.extrapolated) label = "extrapolated";
      w.field(i).field(p.kpoint.path_pos).field(p.kpoint.k.x).field(p.kpoint.k.y).field(b);
      w.field(degeneracy).field(l.omega).field(l.offset / kGHz).field(label).field(l.block);
      w.end_row();
    }
  }
}

double write_diff_csv(std::ostream& out, const KpModel& model, const BandStructure& bands,
                      std::span<const KpPathPoint> points) {
  if (points.size() != bands.points.size())
    throw Error("write_diff_csv: OPW and k.p paths differ in length");
  const double span = model.edge_T5p - model.edge_T5;
  const double window = 0.25 * constants::pi / model.pitch;
  const Vec2 t{constants::pi / model.pitch, constants::pi / model.pitch};
  const double ref_shift = model.omega_ref - derive_params(bands.config.lattice).omega0;
  csv::Writer w(out);
  w.header({"k_index", "path_pos", "kx", "ky", "band", "omega_opw_rad_s", "omega_kp_rad_s",
            "diff_rad_s", "diff_over_span", "in_window"});
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto& states = bands.points[i].states;
    const bool inside = (p.kpoint.k - t).norm() <= window * (1.0 + 1e-12);
    for (std::size_t b = 0; b < p.levels.size() && b / 2 < states.size(); ++b) {
      const auto& s = states[b / 2];
      // Compared as detunings so the difference keeps full precision.
      const double diff = p.levels[b].offset + ref_shift - s.detuning;
      const double frac = std::abs(diff) / span;
      if (inside) worst = std::max(worst, frac);
      w.field(i).field(p.kpoint.path_pos).field(p.kpoint.k.x).field(p.kpoint.k.y).field(b);
      w.field(s.omega).field(p.levels[b].omega).field(diff).field(frac).field(inside ? 1 : 0);
      w.end_row();
    }
  }
  return worst;
}

void write_fourier_csv(std::ostream& out, const LatticeSpec& lattice, int reach) {
  csv::Writer w(out);
  w.header({"m", "n", "value"});
  for (int m = -reach; m <= reach; ++m)
    for (int n = -reach; n <= reach; ++n) {
      w.field(m).field(n).field(fourier_coefficient(lattice, m, n));
      w.end_row();
    }
}

std::vector<SplitRow> split_table(const ExperimentConfig& config, std::span<const double> omegas) {
  const auto& lattice = config.lattice;
  if (lattice.dphi == 0.0) throw ValidationError("dphi: splitting needs a patterned mirror (dphi != 0)", "dphi");
  const OpwSolver solver(lattice, config.basis_halfwidth);
  const auto model = kp_from_opw(band_edges(solver), lattice, ClosedFormSource{});
  std::vector<SplitRow> rows;
  for (const double w : omegas) {
    const auto kp = zeeman_splittings_at_T(model, RotationSpec{w});
    const auto f = splittings(model.m_plus, model.m_minus, lattice.n_refr, w);
    SplitRow r{w, kp.delta_omega_S, kp.delta_omega_L, f.delta_omega_S, f.delta_omega_L, 0.0};
    if (f.delta_omega_S != 0.0)
      r.rel_diff = std::max(std::abs(kp.delta_omega_S / f.delta_omega_S - 1.0),
                            std::abs(kp.delta_omega_L / f.delta_omega_L - 1.0));
    rows.push_back(r);
  }
  return rows;
}

void write_split_csv(std::ostream& out, std::span<const SplitRow> rows) {
  csv::Writer w(out);
  w.header({"omega_rad_s", "dwS_kp", "dwL_kp", "dwS_formula", "dwL_formula", "rel_diff"});
  for (const auto& r : rows) {
    w.field(r.omega).field(r.dws_kp).field(r.dwl_kp).field(r.dws_formula).field(r.dwl_formula);
    w.field(r.rel_diff);
    w.end_row();
  }
}

std::vector<LatticeSpec> sweep_lattices(const LatticeSpec& base, const SweepSpec& spec) {
  if (spec.points < 2) throw ValidationError("points: a sweep needs at least two points", "points");
  if (spec.log && !(spec.from * spec.to > 0.0))
    throw ValidationError("from: a logarithmic sweep needs bounds of the same sign, both nonzero", "from");
  std::vector<LatticeSpec> out;
  out.reserve(static_cast<std::size_t>(spec.points));
  for (int i = 0; i < spec.points; ++i) {
    const double t = static_cast<double>(i) / (spec.points - 1);
    double value = spec.log ? spec.from * std::pow(spec.to / spec.from, t)
                            : spec.from + (spec.to - spec.from) * t;
    if (i == spec.points - 1) value = spec.to;
    LatticeSpec l = base;
    switch (spec.param) {
      case SweepParam::Dphi: l.dphi = value; break;
      case SweepParam::Pitch: l.pitch = value; break;
      case SweepParam::FillFactor: l.fill_factor = value; break;
    }
    validate(l);
    if (l.dphi == 0.0) throw ValidationError("dphi: the closed form is singular at dphi = 0", "dphi");
    out.push_back(l);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const LatticeSpec> lattices, unsigned threads) {
  std::vector<ZeemanResult> results(lattices.size());
  parallel_for(lattices.size(), threads, [&](std::size_t i) { results[i] = analyze(lattices[i]); });
  csv::Writer w(out);
  w.header({"dphi", "pitch_um", "M_plus", "M_minus", "M", "dwL_over_Omega", "dwS_over_Omega",
            "spread_rms_mm", "consistency_ratio", "ff"});
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const auto& l = lattices[i];
    const auto& r = results[i];
    w.field(l.dphi).field(l.pitch * 1e6).field(r.m_plus).field(r.m_minus).field(r.m_total);
    w.field(r.delta_omega_L_per_Omega).field(r.delta_omega_S_per_Omega).field(r.spread_rms * 1e3);
    w.field(r.consistency_ratio).field(l.fill_factor);
    w.end_row();
  }
}

std::string band_plot_script(const std::string& opw_csv, const std::string& kp_csv) {
  std::string s =
      "set datafile separator ','\n"
      "set xlabel 'path position (pi/pitch)'\n"
      "set ylabel 'detuning (GHz)'\n"
      "set key top left\n";
  s += fmt::format("plot '{}' using 2:8 skip 1 with points pt 7 ps 0.5 title 'plane waves'", opw_csv);
  if (!kp_csv.empty())
    s += fmt::format(", \\\n     '{}' using 2:8 skip 1 with points pt 6 ps 0.5 title 'k.p'", kp_csv);
  s += "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Command-line front end.

namespace {

struct UsageError : Error {
  using Error::Error;
};

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw UsageError("cannot write output file '" + path + "'");
    out_ = &file_;
  }
  std::ostream& stream() { return *out_; }
  void close(const std::string& path) {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw Error("failed writing '" + path + "'");
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void write_file(const std::string& path, const std::string& content) {
  std::ostream null(nullptr);
  OutputFile f(path, null);
  f.stream() << content;
  f.close(path);
}

ExperimentConfig read_config(const std::string& path, std::ostream& err) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("config file '" + path + "' not found");
  auto config = load_config_file(path);
  for (const auto& w : config.warnings) err << "warning: " << w << '\n';
  return config;
}

std::string sibling(const std::string& output, std::string_view suffix) {
  std::filesystem::path p(output);
  const auto ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  p.replace_filename(p.stem().string() + std::string(suffix) + ext);
  return p.string();
}

struct BandsArgs {
  std::string config;
  std::string output;
  std::string kpath;
  int samples = 0;
  std::string model = "opw";
  std::string fourier;
  std::string plotscript;
};

int cmd_bands(const BandsArgs& a, unsigned threads, std::ostream& out, std::ostream& err) {
  auto config = read_config(a.config, err);
  if (!a.kpath.empty()) config.kpath = a.kpath;
  if (a.samples > 0) config.samples_per_segment = a.samples;
  const auto path = make_kpath(config.kpath, config.samples_per_segment, config.lattice.pitch);
  const bool want_opw = a.model != "kp";
  const bool want_kp = a.model != "opw";
  if (a.model == "both" && (a.output.empty() || a.output == "-"))
    throw UsageError("--model both writes three files and needs --output");
  if (want_kp && config.lattice.dphi == 0.0)
    throw UsageError("the k.p model needs a patterned mirror (dphi != 0)");

  if (!a.fourier.empty()) {
    std::ostream null(nullptr);
    OutputFile f(a.fourier, null);
    write_fourier_csv(f.stream(), config.lattice, 2 * config.basis_halfwidth);
    f.close(a.fourier);
  }

  std::optional<BandStructure> opw;
  if (want_opw) opw = solve_bands(config, {.n_bands = 8, .threads = threads});

  std::optional<KpModel> model;
  std::vector<KpPathPoint> kp;
  if (want_kp) {
    const OpwSolver solver(config.lattice, config.basis_halfwidth);
    model = kp_from_opw(band_edges(solver), config.lattice, ClosedFormSource{});
    kp = kp_path(*model, path, config.rotation);
  }

  std::string opw_name = a.output, kp_name = a.output;
  if (a.model == "both") {
    opw_name = sibling(a.output, "_opw");
    kp_name = sibling(a.output, "_kp");
  }
  if (opw) {
    OutputFile f(opw_name, out);
    write_opw_csv(f.stream(), *opw);
    f.close(opw_name);
  }
  if (model) {
    OutputFile f(kp_name, out);
    write_kp_csv(f.stream(), kp);
    f.close(kp_name);
  }
  if (opw && model) {
    const auto diff_name = sibling(a.output, "_diff");
    OutputFile f(diff_name, out);
    const double worst = write_diff_csv(f.stream(), *model, *opw, kp);
    f.close(diff_name);
    err << fmt::format("max |k.p - OPW| / span within 0.25 pi/pitch of T: {:.4g}\n", worst);
  }
  if (!a.plotscript.empty())
    write_file(a.plotscript, band_plot_script(opw ? opw_name : kp_name,
                                              opw && model ? kp_name : std::string{}));
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Band structure and rotation-splitting analysis for patterned-mirror cavity arrays",
               "czband"};
  app.require_subcommand(1, 1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  BandsArgs bands;
  auto* sub_bands = app.add_subcommand("bands", "band structure along a k-path");
  sub_bands->add_option("config", bands.config, "experiment JSON")->required();
  sub_bands->add_option("-o,--output", bands.output, "output CSV ('-' for stdout)");
  sub_bands->add_option("--kpath", bands.kpath, "colon-separated path over G, Z, T");
  sub_bands->add_option("--samples", bands.samples, "intervals per path segment")
      ->check(CLI::PositiveNumber);
  sub_bands->add_option("--model", bands.model, "opw, kp or both")
      ->check(CLI::IsMember({"opw", "kp", "both"}));
  sub_bands->add_option("--dump-fourier", bands.fourier, "also write pattern Fourier coefficients");
  sub_bands->add_option("--emit-plotscript", bands.plotscript, "write a gnuplot script");

  std::string split_config, split_output;
  std::vector<double> omegas = {0.0, 10.0, 100.0, 1000.0};
  auto* sub_split = app.add_subcommand("split", "rotation splittings at T");
  sub_split->add_option("config", split_config, "experiment JSON")->required();
  sub_split->add_option("-o,--output", split_output, "output CSV ('-' for stdout)");
  sub_split->add_option("--omega-list", omegas, "rotation rates in rad/s")->delimiter(',');

  std::string sweep_config, sweep_output, sweep_param = "dphi";
  SweepSpec sweep;
  sweep.points = 20;
  auto* sub_sweep = app.add_subcommand("sweep", "closed-form splitting versus one lattice parameter");
  sub_sweep->add_option("config", sweep_config, "experiment JSON")->required();
  sub_sweep->add_option("-o,--output", sweep_output, "output CSV ('-' for stdout)");
  sub_sweep->add_option("--param", sweep_param, "dphi, pitch (um) or ff")
      ->check(CLI::IsMember({"dphi", "pitch", "ff"}));
  sub_sweep->add_option("--from", sweep.from, "first value")->required();
  sub_sweep->add_option("--to", sweep.to, "last value")->required();
  sub_sweep->add_option("--points", sweep.points, "number of values")->check(CLI::Range(2, 1000000));
  sub_sweep->add_flag("--log", sweep.log, "geometric spacing");

  std::string validate_config, validate_json;
  auto* sub_validate = app.add_subcommand("validate", "run the cross-validation checks");
  sub_validate->add_option("config", validate_config, "experiment JSON")->required();
  sub_validate->add_option("--json", validate_json, "also write the report as JSON");

  std::string fourier_config, fourier_output;
  int fourier_reach = -1;
  auto* sub_fourier = app.add_subcommand("dump-fourier", "pattern Fourier coefficients");
  sub_fourier->add_option("config", fourier_config, "experiment JSON")->required();
  sub_fourier->add_option("-o,--output", fourier_output, "output CSV ('-' for stdout)");
  sub_fourier->add_option("--reach", fourier_reach, "largest |m|, |n| (default 2*basis_halfwidth)")
      ->check(CLI::NonNegativeNumber);

  for (auto* sub : {sub_bands, sub_split, sub_sweep, sub_validate, sub_fourier}) sub->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (sub_bands->parsed()) return cmd_bands(bands, threads, out, err);

    if (sub_split->parsed()) {
      const auto config = read_config(split_config, err);
      const auto rows = split_table(config, omegas);
      OutputFile f(split_output, out);
      write_split_csv(f.stream(), rows);
      f.close(split_output);
      return 0;
    }

    if (sub_sweep->parsed()) {
      const auto config = read_config(sweep_config, err);
      if (sweep_param == "pitch") {
        sweep.param = SweepParam::Pitch;
        sweep.from *= 1e-6;
        sweep.to *= 1e-6;
      } else if (sweep_param == "ff") {
        sweep.param = SweepParam::FillFactor;
      }
      const auto lattices = sweep_lattices(config.lattice, sweep);
      if (std::any_of(lattices.begin(), lattices.end(), [](const auto& l) { return l.dphi < 0.0; }))
        err << "warning: negative dphi gives negative M+-, outside the demonstrated regime\n";
      OutputFile f(sweep_output, out);
      write_sweep_csv(f.stream(), lattices, threads);
      f.close(sweep_output);
      return 0;
    }

    if (sub_validate->parsed()) {
      const auto config = read_config(validate_config, err);
      const auto report = run_validation(config, threads);
      out << report.text();
      if (!validate_json.empty()) write_file(validate_json, report.json() + "\n");
      if (report.ok()) return 0;
      std::string failed;
      for (const auto& c : report.checks)
        if (c.required && c.status == CheckStatus::Fail) failed += (failed.empty() ? "" : ", ") + c.name;
      err << "failed checks: " << failed << '\n';
      return 1;
    }

    if (sub_fourier->parsed()) {
      const auto config = read_config(fourier_config, err);
      OutputFile f(fourier_output, out);
      write_fourier_csv(f.stream(), config.lattice,
                        fourier_reach >= 0 ? fourier_reach : 2 * config.basis_halfwidth);
      f.close(fourier_output);
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace czband
