#pragma once

#include "strand/grid.hpp"

namespace strand {

/// Section of P -> X: position r, attitude Lambda and lifted rotor angles theta.
struct UnreducedSection {
    VecField r;
    RotField Lambda;
    VecField theta;

    const Grid2& grid() const { return r.grid(); }
};

/// SO(3)-reduced fields. Derivatives of rho and theta are taken on demand.
struct Stage1Section {
    VecField rho;
    VecField theta;
    VecField Omega;
    VecField omega;

    const Grid2& grid() const { return rho.grid(); }
};

/// Fully reduced fields; a and b stand for theta_s and theta_t.
struct Stage2Section {
    VecField rho;
    VecField a;
    VecField b;
    VecField Omega;
    VecField omega;

    const Grid2& grid() const { return rho.grid(); }
};

/// Left-trivialised group derivatives Lambda^T dLambda/ds and Lambda^T dLambda/dt.
/// The first-derivative stencil is applied to log(Lambda_n^T Lambda_m), which
/// keeps the result in the Lie algebra and is second order.
VecField group_derivative_s(const RotField& Lambda);
VecField group_derivative_t(const RotField& Lambda);

Stage1Section project_stage1(const UnreducedSection& u);
Stage2Section project_stage2(const Stage1Section& s1);

/// (Gamma, alpha) . (r, Lambda, theta) = (Gamma r, Gamma Lambda, theta + alpha).
UnreducedSection act(const UnreducedSection& u, const Rot3& Gamma, const Vec3& alpha);

/// r = Lambda rho for a given attitude field.
UnreducedSection lift(const Stage1Section& s1, const RotField& Lambda);

/// Zero-curvature defect d_s(omega) - d_t(Omega) + Omega x omega.
VecField flatness_residual_rotation(const VecField& Omega, const VecField& omega);
VecField flatness_residual_rotation(const Stage1Section& s1);
VecField flatness_residual_rotation(const Stage2Section& s2);

/// Rotor compatibility defect d_t(a) - d_s(b).
VecField flatness_residual_rotor(const Stage2Section& s2);

enum class SweepOrder { RowFirst, ColumnFirst };

/// How the increment between neighbouring nodes is formed from the rates.
///  Midpoint:   h (x_k + x_{k+1}) / 2, a second-order accurate path integral.
///  Compatible: h (-x_{k-1} + 5 x_k + 5 x_{k+1} - x_{k+2}) / 8 (skewed near the
///              ends), chosen so that the centred group derivative of the result
///              returns the input rates to fourth order. Use it when the lift is
///              fed back into stencil-based residuals.
enum class StepRule { Midpoint, Compatible };

struct ReconstructOptions {
    SweepOrder order = SweepOrder::RowFirst;
    int reortho_every = 1;
    StepRule rule = StepRule::Midpoint;
};

/**
 * Integrates Lambda from (Omega, omega) starting at Lambda[0,0] = Lambda0.
 *
 * RowFirst walks the t = 0 row with exponentials of the Omega increments and then each
 * s-column forward in t with omega; ColumnFirst does the transpose. Throws NotFlat
 * when the interior flatness residual exceeds tol and NearAngleApi when a single
 * step rotates by pi/2 or more.
 */
RotField reconstruct_rotation(const VecField& Omega, const VecField& omega, const Rot3& Lambda0, double tol,
                              const ReconstructOptions& options = {});

/// Max rotation angle between the RowFirst and ColumnFirst reconstructions.
double path_independence_defect(const VecField& Omega, const VecField& omega, const Rot3& Lambda0, double tol);

/// Trapezoid path integration of (a, b) from the origin corner.
VecField reconstruct_theta(const VecField& a, const VecField& b, const Vec3& theta0, double tol);

}  // namespace strand
