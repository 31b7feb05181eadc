#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fdp/domain.hpp"

namespace fdp {

/// Names of the built-in configurations: example1 ... example5.
std::vector<std::string> preset_names();

/// One-line description of a preset.
std::string preset_summary(std::string_view name);

/// Built-in configuration; throws ConfigError for an unknown name.
SimulationConfig preset(std::string_view name);

/// Parses the sectioned key-value format produced by format_config():
///
///   [model]        tau, n_species, nu_c, zeta, name
///   [species1]     chi, nu, gamma, initial      ([species2] likewise)
///   [chemoattractant] initial                    (required for tau = 1)
///   [domain]       x_lo, x_hi, y_lo, y_hi
///   [numerics]     delta, safety, kernel_cutoff
///   [run]          t_end, snapshots
///
/// Profiles read "constant <v>" or "gaussian <amplitude> <x0> <y0> <rate>".
/// Numbers may be written as fractions such as 2/15. '#' starts a comment.
/// Unknown keys, missing required keys and validation failures throw
/// ConfigError naming the line or field.
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config, full precision.
std::string format_config(const SimulationConfig& cfg);

/// Parses a number, accepting "a/b" fractions.
double parse_number(std::string_view s);

/// Comma-separated list of numbers (fractions allowed).
std::vector<double> parse_number_list(std::string_view s);

}  // namespace fdp
