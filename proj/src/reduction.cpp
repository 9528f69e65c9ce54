#include "strand/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strand/errors.hpp"
#include "strand/parallel.hpp"

namespace strand {

namespace {

void require_same_grid(const Grid2& a, const Grid2& b) {
    if (!(a == b)) throw InvalidArgument("fields live on different grids");
}

}  // namespace

VecField group_derivative_s(const RotField& Lambda) {
    const Grid2& g = Lambda.grid();
    VecField out(g);
    parallel_for(static_cast<std::size_t>(g.n_t), [&](std::size_t begin, std::size_t end) {
        for (int it = static_cast<int>(begin); it < static_cast<int>(end); ++it) {
            for (int is = 0; is < g.n_s; ++is) {
                const Stencil st = derivative_stencil(is, g.n_s, g.ds, g.periodic());
                const Rot3 inv = Lambda(it, is).inverse();
                Vec3 acc = Vec3::Zero();
                for (int k = 0; k < st.n; ++k) {
                    if (st.idx[k] == is) continue;
                    acc += st.w[k] * log_so3(inv * Lambda(it, st.idx[k]));
                }
                out(it, is) = acc;
            }
        }
    });
    return out;
}

VecField group_derivative_t(const RotField& Lambda) {
    const Grid2& g = Lambda.grid();
    VecField out(g);
    parallel_for(static_cast<std::size_t>(g.n_t), [&](std::size_t begin, std::size_t end) {
        for (int it = static_cast<int>(begin); it < static_cast<int>(end); ++it) {
            const Stencil st = derivative_stencil(it, g.n_t, g.dt, false);
            for (int is = 0; is < g.n_s; ++is) {
                const Rot3 inv = Lambda(it, is).inverse();
                Vec3 acc = Vec3::Zero();
                for (int k = 0; k < st.n; ++k) {
                    if (st.idx[k] == it) continue;
                    acc += st.w[k] * log_so3(inv * Lambda(st.idx[k], is));
                }
                out(it, is) = acc;
            }
        }
    });
    return out;
}

Stage1Section project_stage1(const UnreducedSection& u) {
    const Grid2& g = u.grid();
    require_same_grid(g, u.Lambda.grid());
    require_same_grid(g, u.theta.grid());
    Stage1Section s1{VecField(g), u.theta, group_derivative_s(u.Lambda), group_derivative_t(u.Lambda)};
    for (std::size_t k = 0; k < g.size(); ++k) s1.rho[k] = u.Lambda[k].inverse() * u.r[k];
    return s1;
}

Stage2Section project_stage2(const Stage1Section& s1) {
    return Stage2Section{s1.rho, d_s(s1.theta), d_t(s1.theta), s1.Omega, s1.omega};
}

UnreducedSection act(const UnreducedSection& u, const Rot3& Gamma, const Vec3& alpha) {
    UnreducedSection out = u;
    for (std::size_t k = 0; k < u.r.size(); ++k) {
        out.r[k] = Gamma * u.r[k];
        out.Lambda[k] = Gamma * u.Lambda[k];
        out.theta[k] = u.theta[k] + alpha;
    }
    return out;
}

UnreducedSection lift(const Stage1Section& s1, const RotField& Lambda) {
    require_same_grid(s1.grid(), Lambda.grid());
    UnreducedSection u{VecField(s1.grid()), Lambda, s1.theta};
    for (std::size_t k = 0; k < u.r.size(); ++k) u.r[k] = Lambda[k] * s1.rho[k];
    return u;
}

VecField flatness_residual_rotation(const VecField& Omega, const VecField& omega) {
    require_same_grid(Omega.grid(), omega.grid());
    VecField res = d_s(omega) - d_t(Omega);
    for (std::size_t k = 0; k < res.size(); ++k) res[k] += Omega[k].cross(omega[k]);
    return res;
}

VecField flatness_residual_rotation(const Stage1Section& s1) {
    return flatness_residual_rotation(s1.Omega, s1.omega);
}

VecField flatness_residual_rotation(const Stage2Section& s2) {
    return flatness_residual_rotation(s2.Omega, s2.omega);
}

VecField flatness_residual_rotor(const Stage2Section& s2) { return d_t(s2.a) - d_s(s2.b); }

namespace {

Rot3 step(const Rot3& from, const Vec3& increment) {
    if (increment.norm() >= 0.5 * std::numbers::pi) {
        throw NearAngleApi("reconstruction step rotates by " + std::to_string(increment.norm()) + " rad");
    }
    return from * exp_so3(increment);
}

Rot3 maybe_reortho(const Rot3& r, int count, int every) {
    return (count % every == 0) ? reorthonormalize(r.matrix()) : r;
}

void check_flat(const VecField& Omega, const VecField& omega, double tol) {
    const double flat = interior_max_norm(flatness_residual_rotation(Omega, omega), 1);
    if (!(flat <= tol)) throw NotFlat(flat, tol);
}

// Average rate over the interval [k, k+1] of a line of n nodes.
template <class At>
Vec3 increment(At x, int k, int n, bool periodic, StepRule rule) {
    if (rule == StepRule::Midpoint || (n < 4 && !periodic)) return 0.5 * (x(k) + x(k + 1));
    auto wrap = [&](int j) { return periodic ? (j + n) % n : j; };
    if (periodic || (k >= 1 && k + 2 < n)) {
        return (-x(wrap(k - 1)) + 5.0 * x(k) + 5.0 * x(wrap(k + 1)) - x(wrap(k + 2))) / 8.0;
    }
    // First and last intervals: the unique weights that keep the centred
    // derivative exact at the node next to the end.
    if (k == 0) return (x(0) + 11.0 * x(1) - 5.0 * x(2) + x(3)) / 8.0;
    return (x(n - 4) - 5.0 * x(n - 3) + 11.0 * x(n - 2) + x(n - 1)) / 8.0;
}

}  // namespace

RotField reconstruct_rotation(const VecField& Omega, const VecField& omega, const Rot3& Lambda0, double tol,
                              const ReconstructOptions& options) {
    require_same_grid(Omega.grid(), omega.grid());
    if (options.reortho_every < 1) throw InvalidArgument("reortho_every must be >= 1");
    check_flat(Omega, omega, tol);

    const Grid2& g = Omega.grid();
    RotField lam(g);
    lam(0, 0) = Lambda0;
    const int every = options.reortho_every;
    const StepRule rule = options.rule;
    auto s_step = [&](int it, int is) {
        const Vec3 inc = g.ds * increment([&](int k) { return Omega(it, k); }, is, g.n_s, g.periodic(), rule);
        lam(it, is + 1) = maybe_reortho(step(lam(it, is), inc), is + 1, every);
    };
    auto t_step = [&](int it, int is) {
        const Vec3 inc = g.dt * increment([&](int k) { return omega(k, is); }, it, g.n_t, false, rule);
        lam(it + 1, is) = maybe_reortho(step(lam(it, is), inc), it + 1, every);
    };

    if (options.order == SweepOrder::RowFirst) {
        for (int is = 0; is + 1 < g.n_s; ++is) s_step(0, is);
        for (int is = 0; is < g.n_s; ++is) {
            for (int it = 0; it + 1 < g.n_t; ++it) t_step(it, is);
        }
    } else {
        for (int it = 0; it + 1 < g.n_t; ++it) t_step(it, 0);
        for (int it = 0; it < g.n_t; ++it) {
            for (int is = 0; is + 1 < g.n_s; ++is) s_step(it, is);
        }
    }
    return lam;
}

double path_independence_defect(const VecField& Omega, const VecField& omega, const Rot3& Lambda0, double tol) {
    const RotField rows = reconstruct_rotation(Omega, omega, Lambda0, tol, {SweepOrder::RowFirst, 1});
    const RotField cols = reconstruct_rotation(Omega, omega, Lambda0, tol, {SweepOrder::ColumnFirst, 1});
    double worst = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        worst = std::max(worst, rotation_angle(rows[k].inverse() * cols[k]));
    }
    return worst;
}

VecField reconstruct_theta(const VecField& a, const VecField& b, const Vec3& theta0, double tol) {
    require_same_grid(a.grid(), b.grid());
    const double flat = interior_max_norm(d_t(a) - d_s(b), 1);
    if (!(flat <= tol)) throw NotFlat(flat, tol);

    const Grid2& g = a.grid();
    VecField theta(g);
    theta(0, 0) = theta0;
    for (int is = 0; is + 1 < g.n_s; ++is) {
        theta(0, is + 1) = theta(0, is) + 0.5 * g.ds * (a(0, is) + a(0, is + 1));
    }
    for (int is = 0; is < g.n_s; ++is) {
        for (int it = 0; it + 1 < g.n_t; ++it) {
            theta(it + 1, is) = theta(it, is) + 0.5 * g.dt * (b(it, is) + b(it + 1, is));
        }
    }
    return theta;
}

}  // namespace strand
