#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "strand/reduction.hpp"
#include "strand/simulate.hpp"

namespace strand {

/// Reals are written with 17 significant digits so that a read/write round trip
/// is lossless.
std::string format_real(double x);
/// Six significant digits, for tolerances and metadata meant for people.
std::string format_short(double x);

/// FNV-1a 64-bit hash of a byte string, printed as 16 hex digits in manifests.
std::uint64_t checksum(const std::string& bytes);

/// CSV body for one field: header `t_index,s_index,t,s,c1,c2,c3` (c1..c9 for
/// rotations, row-major), rows t-major then s, LF line endings.
std::string field_csv(const VecField& f);
std::string field_csv(const RotField& f);

VecField parse_vec_field_csv(const std::string& text, const Grid2& grid, const std::string& origin);
RotField parse_rot_field_csv(const std::string& text, const Grid2& grid, const std::string& origin);

/// Named field files of an output directory together with their checksums.
struct Manifest {
    Grid2 grid;
    std::map<std::string, std::uint64_t> files;  ///< file name -> checksum

    std::string text() const;
    static Manifest parse(const std::string& text, const std::string& origin);
};

/// Writes rho.csv, theta.csv, Omega.csv, omega.csv and manifest.txt into dir.
void write_fields(const Stage1Section& s1, const std::filesystem::path& dir);

/// Adds Lambda.csv to dir and refreshes the manifest.
void write_rotation_field(const RotField& lambda, const std::filesystem::path& dir);

/// Reads a directory produced by write_fields, verifying every checksum.
Stage1Section read_fields(const std::filesystem::path& dir);

/// Writes or adds an arbitrary extra file and records its checksum in the manifest.
void write_tracked_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);

std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows);

/// Initial-slice CSV: header `s_index,` followed by rho1..3,u1..3,theta1..3,a1..3,v1..3,Omega1..3,omega1..3.
std::string state_slice_csv(const StateSlice& x);
StateSlice read_state_slice(const std::filesystem::path& path, int n_s);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace strand
