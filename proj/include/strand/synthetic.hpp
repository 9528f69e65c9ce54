#pragma once

#include <random>
#include <vector>

#include "strand/model.hpp"
#include "strand/reduction.hpp"
#include "strand/residuals.hpp"

namespace strand {

/// Finite trigonometric series in (t, s) with closed-form first derivatives.
/// Wave numbers in s are integers when the field must be periodic on [0, L).
class SmoothVectorField {
public:
    struct Mode {
        Vec3 amplitude;
        double k_s = 0.0;  ///< angular wave number in s
        double k_t = 0.0;  ///< angular wave number in t
        double phase = 0.0;
    };

    SmoothVectorField() = default;
    SmoothVectorField(Vec3 offset, std::vector<Mode> modes) : offset_(std::move(offset)), modes_(std::move(modes)) {}

    Vec3 value(double t, double s) const;
    Vec3 d_s(double t, double s) const;
    Vec3 d_t(double t, double s) const;

    VecField sample(const Grid2& g) const;

    /// A random field with n_modes modes, amplitudes up to `amplitude` and
    /// at most `max_wave` periods over the length and the duration of g.
    static SmoothVectorField random(std::mt19937_64& rng, const Grid2& g, int n_modes, double amplitude,
                                    int max_wave = 2);

private:
    Vec3 offset_ = Vec3::Zero();
    std::vector<Mode> modes_;
};

/**
 * Closed-form section r(t,s), Lambda = exp(phi(t,s)), theta(t,s). Its exact
 * reduced fields follow from the right Jacobian of exp:
 *   Omega = Jr(phi) phi_s,   omega = Jr(phi) phi_t,   rho = Lambda^T r.
 */
struct AnalyticLift {
    SmoothVectorField r;
    SmoothVectorField phi;
    SmoothVectorField theta;

    UnreducedSection sample(const Grid2& g) const;
    /// Stage-1 fields evaluated from the closed form (no finite differences).
    Stage1Section exact_stage1(const Grid2& g) const;

    static AnalyticLift random(std::mt19937_64& rng, const Grid2& g, double rotation_amplitude = 0.6);
};

/// Smooth stage-1 section shaped like the twist-pulse initial data: a Gaussian
/// bump in Omega_3 centred at L/2 with width L/10, modulated in time, on top of
/// small smooth perturbations of every field. Not flat; meant for action tests.
Stage1Section twist_pulse_section(const Grid2& g, const ModelParams& p);

/// Smooth variation vanishing within distance 1 of every clamped or time boundary.
VariationSpec smooth_variation(const Grid2& g, std::uint64_t seed);

Stage1Point random_stage1_point(std::mt19937_64& rng);
UnreducedPoint random_unreduced_point(std::mt19937_64& rng);
Rot3 random_rotation(std::mt19937_64& rng);
Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0);

/// Random valid parameters: SPD I and K, PSD C and D, kappa >= 0, c0 > 0.
ModelParams random_params(std::mt19937_64& rng);

/// Parameters used by the CLI and the verification suites when none are given.
ModelParams default_params();

/// Fixed parameters with principal axes tilted away from the body frame, so
/// that the twist pulse excites fully three-dimensional (non-commuting) motion.
ModelParams anisotropic_params();

}  // namespace strand
