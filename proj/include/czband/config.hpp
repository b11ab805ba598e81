#pragma once

#include <filesystem>
#include <string_view>

#include "czband/types.hpp"

namespace czband {

/// Parses and validates the JSON experiment document.
///
/// Required keys: lambda_nm, n, pitch_um, ff, dphi. Optional keys:
/// omega_rad_s (0), basis_halfwidth (7), kpath ("G:Z:T:G"),
/// samples_per_segment (40). Unknown keys are rejected so that typos do not
/// silently fall back to defaults.
///
/// Throws ConfigError for syntax/type problems and ValidationError when a
/// value breaks a LatticeSpec or ExperimentConfig invariant.
ExperimentConfig load_config(std::string_view text);

ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Inverse of load_config for the keys it understands.
std::string dump_config(const ExperimentConfig& config);

}  // namespace czband
