#include "strand/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "strand/errors.hpp"
#include "strand/parallel.hpp"

namespace strand {

namespace {

VecField apply(const Mat3& m, const VecField& f) {
    VecField out(f.grid());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = m * f[k];
    return out;
}

std::vector<std::uint8_t> one_sided_mask(const Grid2& g) {
    std::vector<std::uint8_t> mask(g.size(), 0);
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            mask[g.index(it, is)] = g.boundary_distance(it, is) < kInteriorBand ? 1 : 0;
        }
    }
    return mask;
}

double masked_norm(const VecField& f, const std::vector<std::uint8_t>& mask, NormKind kind) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (mask[k]) continue;
        const double n = f[k].norm();
        if (kind == NormKind::Max) {
            acc = std::max(acc, n);
        } else {
            acc += n * n;
        }
        ++count;
    }
    if (kind == NormKind::Rms) return count == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(count));
    return acc;
}

}  // namespace

double ResidualNorms::max() const { return std::max({vertical, horizontal_rho, horizontal_theta}); }

ResidualNorms interior_norms(const Stage1Residuals& r, NormKind kind) {
    return {masked_norm(r.vertical, r.one_sided, kind), masked_norm(r.horizontal_rho, r.one_sided, kind),
            masked_norm(r.horizontal_theta, r.one_sided, kind)};
}

ResidualNorms interior_norms(const UnreducedResiduals& r, NormKind kind) {
    return {masked_norm(r.res_Lambda, r.one_sided, kind), masked_norm(r.res_r, r.one_sided, kind),
            masked_norm(r.res_theta, r.one_sided, kind)};
}

Stage1Derivatives stage1_derivatives(const Stage1Section& s1, const ModelParams& p) {
    Stage1Derivatives d;
    d.rho_t = d_t(s1.rho);
    d.rho_tt = d_t(d.rho_t);
    d.theta_s = d_s(s1.theta);
    d.theta_t = d_t(s1.theta);
    d.theta_tt = d_t(d.theta_t);
    d.omega_t = d_t(s1.omega);
    d.ds_dE_dOmega = d_s(apply(p.pot_C, s1.Omega));
    d.ds_dE_da = d_s(apply(p.pot_D, d.theta_s));
    return d;
}

Stage1Derivatives stage2_derivatives(const Stage2Section& s2, const ModelParams& p) {
    Stage1Derivatives d;
    d.rho_t = d_t(s2.rho);
    d.rho_tt = d_t(d.rho_t);
    d.theta_s = s2.a;
    d.theta_t = s2.b;
    d.theta_tt = d_t(s2.b);
    d.omega_t = d_t(s2.omega);
    d.ds_dE_dOmega = d_s(apply(p.pot_C, s2.Omega));
    d.ds_dE_da = d_s(apply(p.pot_D, s2.a));
    return d;
}

Stage1Residuals residual_kernel(const VecField& rho, const VecField& Omega, const VecField& omega,
                                const Stage1Derivatives& d, const ModelParams& p) {
    const Grid2& g = rho.grid();
    Stage1Residuals res{VecField(g), VecField(g), VecField(g), one_sided_mask(g)};
    const Mat3& I = p.inertia_body;
    const Mat3& K = p.inertia_rotor;
    const Mat3 IK = I + K;
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const Vec3& r = rho[k];
            const Vec3& w = omega[k];
            const Vec3& W = Omega[k];
            const Vec3& r_t = d.rho_t[k];
            const Vec3& r_tt = d.rho_tt[k];
            const Vec3& w_t = d.omega_t[k];
            const PotentialGradient grad = dE(W, d.theta_s[k], r.squaredNorm(), p);

            res.vertical[k] = r.cross(r_tt + 2.0 * w.cross(r_t) + w_t.cross(r) + w.dot(r) * w) + IK * w_t +
                              K * d.theta_tt[k] + w.cross(IK * w + K * d.theta_t[k]) - d.ds_dE_dOmega[k] -
                              W.cross(grad.dOmega);
            res.horizontal_rho[k] =
                w.cross(r.cross(w) - 2.0 * r_t) - r_tt - w_t.cross(r) - 2.0 * grad.dc * r;
            res.horizontal_theta[k] = K * w_t + K * d.theta_tt[k] - d.ds_dE_da[k];
        }
    });
    return res;
}

Stage1Residuals stage1_residuals(const Stage1Section& s1, const ModelParams& p) {
    return residual_kernel(s1.rho, s1.Omega, s1.omega, stage1_derivatives(s1, p), p);
}

Stage1Residuals stage2_residuals(const Stage2Section& s2, const ModelParams& p) {
    return residual_kernel(s2.rho, s2.Omega, s2.omega, stage2_derivatives(s2, p), p);
}

double discrete_action(const Stage1Section& s1, const ModelParams& p) {
    const Grid2& g = s1.grid();
    const VecField rho_t = d_t(s1.rho);
    const VecField theta_s = d_s(s1.theta);
    const VecField theta_t = d_t(s1.theta);
    double sum = 0.0;
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            if (g.boundary_distance(it, is) < 1) continue;
            const std::size_t k = g.index(it, is);
            const Stage1Point pt{s1.rho[k], rho_t[k], theta_s[k], theta_t[k], s1.Omega[k], s1.omega[k]};
            sum += lagrangian_stage1(pt, p);
        }
    }
    return sum * g.ds * g.dt;
}

double discrete_action(const UnreducedSection& u, const ModelParams& p) {
    const Grid2& g = u.grid();
    const VecField r_s = d_s(u.r);
    const VecField r_t = d_t(u.r);
    const VecField theta_s = d_s(u.theta);
    const VecField theta_t = d_t(u.theta);
    const VecField Omega = group_derivative_s(u.Lambda);
    const VecField omega = group_derivative_t(u.Lambda);
    double sum = 0.0;
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            if (g.boundary_distance(it, is) < 1) continue;
            const std::size_t k = g.index(it, is);
            const Mat3& lam = u.Lambda[k].matrix();
            const UnreducedPoint pt{u.r[k],      r_s[k],      r_t[k],      u.Lambda[k], lam * hat(Omega[k]),
                                    lam * hat(omega[k]), theta_s[k], theta_t[k]};
            sum += lagrangian_unreduced(pt, p);
        }
    }
    return sum * g.ds * g.dt;
}

void VariationSpec::validate() const {
    const Grid2& g = delta_rho.grid();
    if (!(g == eta.grid()) || !(g == delta_theta.grid())) {
        throw InvalidArgument("variation fields live on different grids");
    }
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            if (g.boundary_distance(it, is) >= kInteriorBand) continue;
            if (delta_rho(it, is).norm() != 0.0 || eta(it, is).norm() != 0.0 || delta_theta(it, is).norm() != 0.0) {
                throw InvalidArgument("variation does not vanish near the boundary");
            }
        }
    }
}

double VariationSpec::norm() const {
    const Grid2& g = delta_rho.grid();
    double sum = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        sum += delta_rho[k].squaredNorm() + eta[k].squaredNorm() + delta_theta[k].squaredNorm();
    }
    return std::sqrt(sum * g.ds * g.dt);
}

GradientCheck action_gradient_check(const Stage1Section& s1, const VariationSpec& var, const ModelParams& p,
                                    double epsilon) {
    var.validate();
    const Grid2& g = s1.grid();
    if (!(g == var.delta_rho.grid())) throw InvalidArgument("variation and section live on different grids");

    const VecField eta_s = d_s(var.eta);
    const VecField eta_t = d_t(var.eta);
    VecField dOmega(g);
    VecField domega(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        dOmega[k] = eta_s[k] + s1.Omega[k].cross(var.eta[k]);
        domega[k] = eta_t[k] + s1.omega[k].cross(var.eta[k]);
    }
    auto action_at = [&](double e) {
        const Stage1Section moved{s1.rho + e * var.delta_rho, s1.theta + e * var.delta_theta, s1.Omega + e * dOmega,
                                  s1.omega + e * domega};
        return discrete_action(moved, p);
    };
    const double fd = (8.0 * (action_at(epsilon) - action_at(-epsilon)) -
                       (action_at(2.0 * epsilon) - action_at(-2.0 * epsilon))) /
                      (12.0 * epsilon);

    const Stage1Residuals res = stage1_residuals(s1, p);
    double pairing = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (res.one_sided[k]) continue;
        pairing += -res.vertical[k].dot(var.eta[k]) + res.horizontal_rho[k].dot(var.delta_rho[k]) -
                   res.horizontal_theta[k].dot(var.delta_theta[k]);
    }
    return {fd, pairing * g.ds * g.dt};
}

UnreducedResiduals el_unreduced_residual(const UnreducedSection& u, const ModelParams& p) {
    const Grid2& g = u.grid();
    const VecField r_t = d_t(u.r);
    const VecField theta_s = d_s(u.theta);
    const VecField theta_t = d_t(u.theta);
    const VecField Omega = group_derivative_s(u.Lambda);
    const VecField omega = group_derivative_t(u.Lambda);
    const Mat3& I = p.inertia_body;
    const Mat3& K = p.inertia_rotor;

    UnreducedResiduals out{VecField(g), VecField(g), VecField(g), one_sided_mask(g)};
    // Scatter each node's momenta through the transpose of its stencils. The
    // common factor ds dt cancels against the final division to densities.
    for (int it = 0; it < g.n_t; ++it) {
        const Stencil st_t = derivative_stencil(it, g.n_t, g.dt, false);
        for (int is = 0; is < g.n_s; ++is) {
            if (g.boundary_distance(it, is) < 1) continue;
            const Stencil st_s = derivative_stencil(is, g.n_s, g.ds, g.periodic());
            const std::size_t n = g.index(it, is);
            const PotentialGradient grad = dE(Omega[n], theta_s[n], u.r[n].squaredNorm(), p);

            const Vec3 p_r = r_t[n];
            const Vec3 p_theta_t = K * (omega[n] + theta_t[n]);
            const Vec3 p_theta_s = -grad.da;
            const Vec3 p_Omega = -grad.dOmega;
            const Vec3 p_omega = I * omega[n] + p_theta_t;

            out.res_r[n] -= 2.0 * grad.dc * u.r[n];
            const Rot3 inv = u.Lambda[n].inverse();
            for (int k = 0; k < st_t.n; ++k) {
                const std::size_t m = g.index(st_t.idx[k], is);
                out.res_r[m] += st_t.w[k] * p_r;
                out.res_theta[m] += st_t.w[k] * p_theta_t;
                if (m == n) continue;
                const Vec3 x = log_so3(inv * u.Lambda[m]);
                out.res_Lambda[m] += st_t.w[k] * (right_jacobian_inv(x).transpose() * p_omega);
                out.res_Lambda[n] -= st_t.w[k] * (left_jacobian_inv(x).transpose() * p_omega);
            }
            for (int k = 0; k < st_s.n; ++k) {
                const std::size_t m = g.index(it, st_s.idx[k]);
                out.res_theta[m] += st_s.w[k] * p_theta_s;
                if (m == n) continue;
                const Vec3 x = log_so3(inv * u.Lambda[m]);
                out.res_Lambda[m] += st_s.w[k] * (right_jacobian_inv(x).transpose() * p_Omega);
                out.res_Lambda[n] -= st_s.w[k] * (left_jacobian_inv(x).transpose() * p_Omega);
            }
        }
    }
    return out;
}

}  // namespace strand
