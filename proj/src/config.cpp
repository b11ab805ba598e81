#include "czband/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "czband/constants.hpp"
#include "czband/error.hpp"

namespace czband {

namespace {

using nlohmann::json;

int line_of_byte(std::string_view text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
}

double number_at(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(std::string("missing required key '") + key + "'", key);
  if (!it->is_number()) throw ConfigError(std::string("key '") + key + "' must be a number", key);
  return it->get<double>();
}

int integer_at(const json& doc, const char* key, int fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number_integer())
    throw ConfigError(std::string("key '") + key + "' must be an integer", key);
  return it->get<int>();
}

void check_kpath(const std::string& path) {
  std::stringstream ss(path);
  std::string token;
  int count = 0;
  while (std::getline(ss, token, ':')) {
    std::string up;
    for (char ch : token) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (up != "G" && up != "Z" && up != "T")
      throw ValidationError("kpath: unknown point '" + token + "' (expected G, Z or T)", "kpath");
    ++count;
  }
  if (count < 2 || path.back() == ':')
    throw ValidationError("kpath: need at least two points, e.g. \"G:Z\"", "kpath");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "lambda_nm", "n",           "pitch_um", "ff", "dphi", "omega_rad_s", "basis_halfwidth",
      "kpath",     "samples_per_segment"};
  return keys;
}

}  // namespace

ExperimentConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what(), "",
                      line);
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object", "", 1);
  for (const auto& [key, value] : doc.items())
    if (!known_keys().contains(key)) throw ConfigError("unknown key '" + key + "'", key);

  ExperimentConfig cfg;
  cfg.lattice.lambda_vac = number_at(doc, "lambda_nm") * 1e-9;
  cfg.lattice.n_refr = number_at(doc, "n");
  cfg.lattice.pitch = number_at(doc, "pitch_um") * 1e-6;
  cfg.lattice.fill_factor = number_at(doc, "ff");
  cfg.lattice.dphi = number_at(doc, "dphi");
  if (doc.contains("omega_rad_s")) cfg.rotation.omega_z = number_at(doc, "omega_rad_s");
  cfg.basis_halfwidth = integer_at(doc, "basis_halfwidth", 7);
  cfg.samples_per_segment = integer_at(doc, "samples_per_segment", 40);
  if (const auto it = doc.find("kpath"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("key 'kpath' must be a string", "kpath");
    cfg.kpath = it->get<std::string>();
  }

  cfg.warnings = validate(cfg.lattice);
  if (cfg.basis_halfwidth < 2)
    throw ValidationError("basis_halfwidth: must be >= 2", "basis_halfwidth");
  if (cfg.samples_per_segment < 1)
    throw ValidationError("samples_per_segment: must be >= 1", "samples_per_segment");
  check_kpath(cfg.kpath);

  // First-order metric regime over the simulated domain.
  const double radius = (2 * cfg.basis_halfwidth + 1) * cfg.lattice.pitch;
  const double regime = std::abs(cfg.rotation.omega_z) * radius / constants::c;
  if (!std::isfinite(regime) || regime >= 0.1)
    throw ValidationError("omega_rad_s: |Omega| r / c must be << 1", "omega_rad_s");
  if (regime > 1e-3) cfg.warnings.push_back("omega_rad_s: |Omega| r / c above 1e-3");
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", "");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  json doc = {
      {"lambda_nm", cfg.lattice.lambda_vac * 1e9},
      {"n", cfg.lattice.n_refr},
      {"pitch_um", cfg.lattice.pitch * 1e6},
      {"ff", cfg.lattice.fill_factor},
      {"dphi", cfg.lattice.dphi},
      {"omega_rad_s", cfg.rotation.omega_z},
      {"basis_halfwidth", cfg.basis_halfwidth},
      {"kpath", cfg.kpath},
      {"samples_per_segment", cfg.samples_per_segment},
  };
  return doc.dump(2);
}

}  // namespace czband
