#pragma once

#include <vector>

#include "strand/residuals.hpp"

namespace strand {

/// Current density with its s and t components (per unit s, per unit t).
struct CurrentPair {
    VecField J_s;
    VecField J_t;
};

/// Spatial angular-momentum current (Lambda dl/dOmega, Lambda dl/domega).
CurrentPair so3_current(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p);

/// Rotor current (dl/dtheta_s, dl/dtheta_t) = (-D a, K(omega + b)).
CurrentPair rotor_current(const Stage1Section& s1, const ModelParams& p);
CurrentPair rotor_current(const Stage2Section& s2, const ModelParams& p);

/// d_s(J_s) + d_t(J_t).
VecField divergence(const CurrentPair& c);

/// Explicit source term of the drift law. Identically zero for the strand: the
/// Maurer-Cartan connection has no curvature form and the symmetry acts
/// vertically with no V-component, so both pairings vanish.
VecField drift_source(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p);

/// divergence(so3_current) - drift_source on a projection-consistent pair.
VecField drift_residual(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p);

/**
 * Drift residual from precomputed derivative fields, by the product rule
 * d(Lambda J) = Lambda (dJ + rate x J) with dJ expanded from the shared fields.
 * Agrees with Lambda * vertical residual up to rounding when both consume the
 * same Stage1Derivatives.
 */
VecField drift_residual_pointwise(const Stage1Section& s1, const RotField& Lambda, const Stage1Derivatives& d,
                                  const ModelParams& p);

/// integrate_s of the t-components of both currents at each time level.
struct ConservedTotals {
    std::vector<Vec3> so3;
    std::vector<Vec3> rotor;

    /// max_t |total(t) - total(0)|.
    double so3_drift() const;
    double rotor_drift() const;
};

ConservedTotals conserved_totals(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p);

}  // namespace strand
