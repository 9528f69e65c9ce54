#pragma once

#include <cstdint>
#include <vector>

#include "strand/model.hpp"
#include "strand/reduction.hpp"

namespace strand {

/**
 * Derivative fields consumed by the residual kernel.
 *
 * Every second derivative is the composition of two first-derivative stencils
 * (rho_tt = d_t(d_t rho), theta_tt = d_t(theta_t)), so a stage-2 section with
 * b = d_t(theta) reproduces the stage-1 fields bit for bit.
 */
struct Stage1Derivatives {
    VecField rho_t;
    VecField rho_tt;
    VecField theta_s;
    VecField theta_t;
    VecField theta_tt;
    VecField omega_t;
    VecField ds_dE_dOmega;  ///< d_s(C Omega)
    VecField ds_dE_da;      ///< d_s(D theta_s)
};

Stage1Derivatives stage1_derivatives(const Stage1Section& s1, const ModelParams& p);
Stage1Derivatives stage2_derivatives(const Stage2Section& s2, const ModelParams& p);

/// Residuals of the three reduced field equations. one_sided[k] is set on nodes
/// whose values depend on one-sided boundary stencils; norms skip them.
struct Stage1Residuals {
    VecField vertical;
    VecField horizontal_rho;
    VecField horizontal_theta;
    std::vector<std::uint8_t> one_sided;
};

struct ResidualNorms {
    double vertical = 0.0;
    double horizontal_rho = 0.0;
    double horizontal_theta = 0.0;
    double max() const;
};

enum class NormKind { Max, Rms };

ResidualNorms interior_norms(const Stage1Residuals& r, NormKind kind = NormKind::Max);

/**
 * Pointwise residuals:
 *   vertical         = rho x (rho_tt + 2 omega x rho_t + omega_t x rho + <omega,rho> omega)
 *                      + (I+K) omega_t + K theta_tt + omega x ((I+K) omega + K theta_t)
 *                      - d_s(dE/dOmega) - Omega x dE/dOmega
 *   horizontal_rho   = omega x (rho x omega - 2 rho_t) - rho_tt - omega_t x rho - 2 rho dE/dc
 *   horizontal_theta = K omega_t + K theta_tt - d_s(dE/da)
 */
Stage1Residuals residual_kernel(const VecField& rho, const VecField& Omega, const VecField& omega,
                                const Stage1Derivatives& d, const ModelParams& p);

Stage1Residuals stage1_residuals(const Stage1Section& s1, const ModelParams& p);

/// Same equations in stage-2 variables; delta l / delta theta vanishes by the
/// torus symmetry, so the rotor equation keeps its stage-1 form.
Stage1Residuals stage2_residuals(const Stage2Section& s2, const ModelParams& p);

/// Sum of the pointwise Lagrangian times ds dt over nodes at distance >= 1 from
/// the clamped boundaries (nodes whose first derivatives are centered).
double discrete_action(const Stage1Section& s1, const ModelParams& p);
double discrete_action(const UnreducedSection& u, const ModelParams& p);

/// Compactly supported variation. eta is the free so(3) variation; the induced
/// variations are dOmega = d_s(eta) + Omega x eta and domega = d_t(eta) + omega x eta.
struct VariationSpec {
    VecField delta_rho;
    VecField eta;
    VecField delta_theta;

    /// Throws InvalidArgument unless all fields vanish on nodes within
    /// kInteriorBand - 1 of a boundary.
    void validate() const;
    /// Discrete L2 norm (sqrt of sum |.|^2 ds dt over all three fields).
    double norm() const;
};

struct GradientCheck {
    double fd_derivative = 0.0;
    double residual_pairing = 0.0;
};

/**
 * Compares the directional derivative of discrete_action along the variation
 * (5-point central difference in epsilon) with
 *   sum_interior ( -<vertical, eta> + <horizontal_rho, delta_rho> - <horizontal_theta, delta_theta> ) ds dt.
 */
GradientCheck action_gradient_check(const Stage1Section& s1, const VariationSpec& var, const ModelParams& p,
                                    double epsilon = 1e-3);

/// Gradient densities of the unreduced discrete action for variations
/// delta r, delta Lambda = Lambda hat(eta) (eta in the body frame) and delta theta.
struct UnreducedResiduals {
    VecField res_r;
    VecField res_Lambda;
    VecField res_theta;
    std::vector<std::uint8_t> one_sided;
};

/// Exact adjoint of the discrete stencils behind discrete_action(UnreducedSection).
UnreducedResiduals el_unreduced_residual(const UnreducedSection& u, const ModelParams& p);

ResidualNorms interior_norms(const UnreducedResiduals& r, NormKind kind = NormKind::Max);

}  // namespace strand
