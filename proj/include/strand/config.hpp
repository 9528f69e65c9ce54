#pragma once

#include <filesystem>
#include <string>

#include "strand/simulate.hpp"

namespace strand {

/**
 * Configuration files are INI-like:
 *
 *   [grid]       n_s, n_t, length, duration, bc (periodic | clamped)
 *   [inertia]    I, K       nine reals row-major, or "diag a b c"
 *   [potential]  C, D, kappa, c0
 *   [init]       preset = NAME   or   file = PATH (relative to the config file)
 *   [scheme]     name (rk4 | midpoint), reortho_every      (optional section)
 *
 * '#' starts a comment. Every key outside [scheme] is mandatory and unknown
 * keys are rejected. Errors carry the dotted key path and the line number.
 * dt = duration / (n_t - 1); ds = length / n_s when periodic, length / (n_s - 1) otherwise.
 */
SimConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
SimConfig read_config(const std::filesystem::path& path);

/// Canonical text form of a configuration, accepted back by parse_config.
std::string echo_config(const SimConfig& cfg);

/// Parses "a b c d e f g h i" or "diag a b c".
Mat3 parse_matrix(const std::string& value, const std::string& key, int line);

}  // namespace strand
