#pragma once

#include <string>
#include <vector>

#include "strand/model.hpp"
#include "strand/reduction.hpp"

namespace strand {

/// Dynamical unknowns along one time level, one entry per s-node.
/// u = rho_t, a = theta_s, v = theta_t. theta itself is carried so that the
/// assembled section has rotor angles without a separate reconstruction.
struct StateSlice {
    std::vector<Vec3> rho;
    std::vector<Vec3> u;
    std::vector<Vec3> theta;
    std::vector<Vec3> a;
    std::vector<Vec3> v;
    std::vector<Vec3> Omega;
    std::vector<Vec3> omega;

    explicit StateSlice(std::size_t n = 0);
    std::size_t size() const { return rho.size(); }

    /// this += k * other, component by component.
    StateSlice& axpy(double k, const StateSlice& other);
    /// Largest Euclidean norm of any entry; NaN propagates.
    double max_norm() const;
};

enum class Scheme { RK4, Midpoint };
enum class Preset { Static, RigidBody, TwistPulse, Helix };

std::string to_string(Scheme s);
std::string to_string(Preset p);
Scheme parse_scheme(const std::string& name);
Preset parse_preset(const std::string& name);

struct SimConfig {
    Grid2 grid;
    ModelParams params;
    Scheme scheme = Scheme::RK4;
    int reortho_every = 16;
    Preset preset = Preset::Static;
    /// When non-empty, the initial slice is read from this CSV instead of the preset.
    std::string init_file;

    /// Largest admissible dt: 0.5 min(1, 1/sqrt(stiffness)) ds.
    double max_stable_dt() const;
    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

/**
 * Time derivative of a slice. The accelerations come from the reduced field
 * equations solved explicitly:
 *   F       = omega x (rho x omega - 2u) - 2 rho dE/dc
 *   I w_t   = -rho x (F + 2 omega x u + <omega,rho> omega) - omega x ((I+K) omega + K v)
 *             + d_s(dE/dOmega) + Omega x dE/dOmega - d_s(dE/da)
 *   v_t     = K^{-1} d_s(dE/da) - omega_t
 *   u_t     = F - omega_t x rho
 *   Omega_t = d_s(omega) + Omega x omega,  a_t = d_s(v)
 */
StateSlice rhs(const StateSlice& slice, const ModelParams& p, double ds, Boundary bc);

StateSlice preset_slice(Preset preset, const Grid2& grid, const ModelParams& p);

/// Strand length at which the twist pulse turns the frame by exactly 2 pi, so a
/// periodic strand closes up (trivial holonomy) and the SO(3) total is conserved.
double closed_twist_length();

/// Per-time-level diagnostics of an assembled run.
struct DiagnosticRow {
    int t_index = 0;
    double t = 0.0;
    bool interior = false;  ///< false on rows whose residuals use one-sided stencils
    double vertical = 0.0;
    double horizontal_rho = 0.0;
    double horizontal_theta = 0.0;
    double flatness_rotation = 0.0;
    double flatness_rotor = 0.0;
    Vec3 so3_total = Vec3::Zero();
    Vec3 rotor_total = Vec3::Zero();
};

struct SimResult {
    Stage1Section section;
    StateSlice final_state;
    std::vector<DiagnosticRow> diagnostics;
};

/// Marches the initial slice through all time levels. Throws Blowup when any
/// state norm exceeds 1e8 and ConfigError for inconsistent configurations.
SimResult run(const SimConfig& cfg);

/// As run(), from an explicit initial slice.
SimResult run_from(const SimConfig& cfg, const StateSlice& initial);

/// Diagnostics of an assembled section (Lambda reconstructed from Lambda0 = Id).
std::vector<DiagnosticRow> diagnostics(const Stage1Section& s1, const ModelParams& p, int reortho_every = 1);

}  // namespace strand
