#include "strand/noether.hpp"

#include <algorithm>

namespace strand {

CurrentPair so3_current(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p) {
    const Grid2& g = s1.grid();
    const VecField rho_t = d_t(s1.rho);
    const VecField theta_s = d_s(s1.theta);
    const VecField theta_t = d_t(s1.theta);
    CurrentPair c{VecField(g), VecField(g)};
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Stage1Point pt{s1.rho[k], rho_t[k], theta_s[k], theta_t[k], s1.Omega[k], s1.omega[k]};
        const FiberDerivatives fd = fiber_derivatives_stage1(pt, p);
        c.J_s[k] = Lambda[k] * fd.dl_dOmega;
        c.J_t[k] = Lambda[k] * fd.dl_domega;
    }
    return c;
}

namespace {
CurrentPair rotor_current_from(const VecField& a, const VecField& b, const VecField& omega, const ModelParams& p) {
    CurrentPair c{VecField(a.grid()), VecField(a.grid())};
    for (std::size_t k = 0; k < a.size(); ++k) {
        c.J_s[k] = -(p.pot_D * a[k]);
        c.J_t[k] = p.inertia_rotor * (omega[k] + b[k]);
    }
    return c;
}
}  // namespace

CurrentPair rotor_current(const Stage1Section& s1, const ModelParams& p) {
    return rotor_current_from(d_s(s1.theta), d_t(s1.theta), s1.omega, p);
}

CurrentPair rotor_current(const Stage2Section& s2, const ModelParams& p) {
    return rotor_current_from(s2.a, s2.b, s2.omega, p);
}

VecField divergence(const CurrentPair& c) { return d_s(c.J_s) + d_t(c.J_t); }

VecField drift_source(const Stage1Section& s1, const RotField& /*Lambda*/, const ModelParams& /*p*/) {
    // <dL/dnu, omega(T rho(.), eta^P) + eta^V>: the V-valued two-form of the
    // Maurer-Cartan connection vanishes and SO(3) acts on P only, so eta^V = 0.
    return VecField(s1.grid());
}

VecField drift_residual(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p) {
    return divergence(so3_current(s1, Lambda, p)) - drift_source(s1, Lambda, p);
}

VecField drift_residual_pointwise(const Stage1Section& s1, const RotField& Lambda, const Stage1Derivatives& d,
                                  const ModelParams& p) {
    const Grid2& g = s1.grid();
    const Mat3& I = p.inertia_body;
    const Mat3& K = p.inertia_rotor;
    const VecField source = drift_source(s1, Lambda, p);
    VecField out(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Vec3& r = s1.rho[k];
        const Vec3& w = s1.omega[k];
        const Vec3& W = s1.Omega[k];
        const Vec3 m = d.rho_t[k] + w.cross(r);
        const Vec3 m_t = d.rho_tt[k] + d.omega_t[k].cross(r) + w.cross(d.rho_t[k]);

        const Vec3 j_t = r.cross(m) + I * w + K * (w + d.theta_t[k]);
        const Vec3 dj_t = d.rho_t[k].cross(m) + r.cross(m_t) + (I + K) * d.omega_t[k] + K * d.theta_tt[k];
        const Vec3 j_s = -(p.pot_C * W);
        const Vec3 dj_s = -d.ds_dE_dOmega[k];

        out[k] = Lambda[k] * (dj_s + W.cross(j_s) + dj_t + w.cross(j_t)) - source[k];
    }
    return out;
}

namespace {
double drift(const std::vector<Vec3>& totals) {
    double worst = 0.0;
    for (const Vec3& v : totals) worst = std::max(worst, (v - totals.front()).norm());
    return worst;
}
}  // namespace

double ConservedTotals::so3_drift() const { return so3.empty() ? 0.0 : drift(so3); }
double ConservedTotals::rotor_drift() const { return rotor.empty() ? 0.0 : drift(rotor); }

ConservedTotals conserved_totals(const Stage1Section& s1, const RotField& Lambda, const ModelParams& p) {
    const CurrentPair so3 = so3_current(s1, Lambda, p);
    const CurrentPair rotor = rotor_current(s1, p);
    ConservedTotals totals;
    for (int it = 0; it < s1.grid().n_t; ++it) {
        totals.so3.push_back(integrate_s(so3.J_t, it));
        totals.rotor.push_back(integrate_s(rotor.J_t, it));
    }
    return totals;
}

}  // namespace strand
