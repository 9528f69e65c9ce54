#include "strand/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "strand/errors.hpp"
#include "strand/field_io.hpp"
#include "strand/noether.hpp"
#include "strand/residuals.hpp"

namespace strand {

namespace {

using Component = std::vector<Vec3> StateSlice::*;
constexpr std::array<Component, 7> kComponents = {&StateSlice::rho, &StateSlice::u,     &StateSlice::theta,
                                                  &StateSlice::a,   &StateSlice::v,     &StateSlice::Omega,
                                                  &StateSlice::omega};

constexpr double kBlowupNorm = 1e8;

std::vector<Vec3> line_derivative(const std::vector<Vec3>& f, double ds, Boundary bc) {
    const int n = static_cast<int>(f.size());
    std::vector<Vec3> out(f.size());
    for (int i = 0; i < n; ++i) {
        const Stencil st = derivative_stencil(i, n, ds, bc == Boundary::Periodic);
        Vec3 acc = st.w[0] * f[st.idx[0]];
        for (int k = 1; k < st.n; ++k) acc += st.w[k] * f[st.idx[k]];
        out[i] = acc;
    }
    return out;
}

}  // namespace

StateSlice::StateSlice(std::size_t n) {
    for (Component c : kComponents) (this->*c).assign(n, Vec3::Zero());
}

StateSlice& StateSlice::axpy(double k, const StateSlice& other) {
    for (Component c : kComponents) {
        auto& mine = this->*c;
        const auto& theirs = other.*c;
        for (std::size_t i = 0; i < mine.size(); ++i) mine[i] += k * theirs[i];
    }
    return *this;
}

double StateSlice::max_norm() const {
    double m = 0.0;
    for (Component c : kComponents) {
        for (const Vec3& x : this->*c) {
            const double n = x.norm();
            if (std::isnan(n)) return n;
            m = std::max(m, n);
        }
    }
    return m;
}

std::string to_string(Scheme s) { return s == Scheme::RK4 ? "rk4" : "midpoint"; }

std::string to_string(Preset p) {
    switch (p) {
        case Preset::Static: return "static";
        case Preset::RigidBody: return "rigidbody";
        case Preset::TwistPulse: return "twistpulse";
        case Preset::Helix: return "helix";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "rk4") return Scheme::RK4;
    if (name == "midpoint") return Scheme::Midpoint;
    throw InvalidArgument("unknown scheme '" + name + "'");
}

Preset parse_preset(const std::string& name) {
    for (Preset p : {Preset::Static, Preset::RigidBody, Preset::TwistPulse, Preset::Helix}) {
        if (name == to_string(p)) return p;
    }
    throw UnknownPreset(name);
}

double SimConfig::max_stable_dt() const {
    const double k = params.stiffness();
    const double factor = k > 1.0 ? 1.0 / std::sqrt(k) : 1.0;
    return 0.5 * factor * grid.ds;
}

void SimConfig::validate() const {
    try {
        params.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("potential", 0, e.what());
    }
    if (reortho_every < 1) throw ConfigError("scheme.reortho_every", 0, "must be >= 1");
    if (grid.dt > max_stable_dt() * (1.0 + 1e-12)) {
        throw ConfigError("grid.n_t", 0,
                          "time step " + std::to_string(grid.dt) + " exceeds the stability guard " +
                              std::to_string(max_stable_dt()));
    }
}

StateSlice rhs(const StateSlice& x, const ModelParams& p, double ds, Boundary bc) {
    const std::size_t n = x.size();
    const Mat3& I = p.inertia_body;
    const Mat3& K = p.inertia_rotor;
    const Mat3 IK = I + K;
    const Eigen::LLT<Mat3> I_llt(I);
    const Eigen::LLT<Mat3> K_llt(K);
    if (I_llt.info() != Eigen::Success || K_llt.info() != Eigen::Success) {
        throw SingularInertia("inertia tensor lost positive definiteness");
    }

    std::vector<Vec3> dE_dOmega(n);
    std::vector<Vec3> dE_da(n);
    for (std::size_t i = 0; i < n; ++i) {
        dE_dOmega[i] = p.pot_C * x.Omega[i];
        dE_da[i] = p.pot_D * x.a[i];
    }
    const std::vector<Vec3> flux_Omega = line_derivative(dE_dOmega, ds, bc);
    const std::vector<Vec3> flux_a = line_derivative(dE_da, ds, bc);
    const std::vector<Vec3> omega_s = line_derivative(x.omega, ds, bc);
    const std::vector<Vec3> v_s = line_derivative(x.v, ds, bc);

    StateSlice out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& r = x.rho[i];
        const Vec3& u = x.u[i];
        const Vec3& w = x.omega[i];
        const Vec3& W = x.Omega[i];
        const double dE_dc = 0.5 * p.pot_kappa * (r.squaredNorm() - p.pot_c0);

        const Vec3 F = w.cross(r.cross(w) - 2.0 * u) - 2.0 * dE_dc * r;
        const Vec3 torque = -r.cross(F + 2.0 * w.cross(u) + w.dot(r) * w) - w.cross(IK * w + K * x.v[i]) +
                            flux_Omega[i] + W.cross(dE_dOmega[i]) - flux_a[i];
        const Vec3 w_t = I_llt.solve(torque);

        out.rho[i] = u;
        out.u[i] = F - w_t.cross(r);
        out.theta[i] = x.v[i];
        out.a[i] = v_s[i];
        out.v[i] = K_llt.solve(flux_a[i]) - w_t;
        out.Omega[i] = omega_s[i] + W.cross(w);
        out.omega[i] = w_t;
    }
    return out;
}

StateSlice preset_slice(Preset preset, const Grid2& grid, const ModelParams& p) {
    const std::size_t n = static_cast<std::size_t>(grid.n_s);
    const double root_c0 = std::sqrt(p.pot_c0);
    const double L = grid.length();
    StateSlice x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = grid.s(static_cast<int>(i));
        x.rho[i] = root_c0 * Vec3::UnitX();
        switch (preset) {
            case Preset::Static:
                break;
            case Preset::RigidBody:
                x.rho[i] = root_c0 * Vec3(1.0, 0.5, -0.3).normalized();
                x.u[i] = Vec3(0.0, 0.1, 0.05);
                x.omega[i] = Vec3(0.4, -0.3, 0.8);
                x.v[i] = Vec3(0.2, 0.1, -0.5);
                break;
            case Preset::TwistPulse: {
                const double width = L / 10.0;
                const double z = (s - 0.5 * L) / width;
                x.Omega[i] = Vec3(0.0, 0.0, std::exp(-0.5 * z * z));
                break;
            }
            case Preset::Helix: {
                const double phase = 2.0 * std::numbers::pi * s / L;
                x.rho[i] = root_c0 * Vec3(std::cos(phase), std::sin(phase), 0.0);
                x.Omega[i] = Vec3(0.0, 0.0, 2.0 * std::numbers::pi / L);
                break;
            }
        }
    }
    return x;
}

double closed_twist_length() {
    // The pulse integrates to sqrt(2 pi) * L / 10; setting that to 2 pi gives L.
    return 10.0 * std::sqrt(2.0 * std::numbers::pi);
}

namespace {

StateSlice advance(const StateSlice& x, const SimConfig& cfg) {
    const double dt = cfg.grid.dt;
    const double ds = cfg.grid.ds;
    const Boundary bc = cfg.grid.bc_s;
    const ModelParams& p = cfg.params;
    if (cfg.scheme == Scheme::Midpoint) {
        const StateSlice k1 = rhs(x, p, ds, bc);
        StateSlice mid = x;
        mid.axpy(0.5 * dt, k1);
        StateSlice next = x;
        return next.axpy(dt, rhs(mid, p, ds, bc));
    }
    const StateSlice k1 = rhs(x, p, ds, bc);
    StateSlice y = x;
    const StateSlice k2 = rhs(y.axpy(0.5 * dt, k1), p, ds, bc);
    y = x;
    const StateSlice k3 = rhs(y.axpy(0.5 * dt, k2), p, ds, bc);
    y = x;
    const StateSlice k4 = rhs(y.axpy(dt, k3), p, ds, bc);
    StateSlice next = x;
    next.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
    return next;
}

void store(Stage1Section& s1, int it, const StateSlice& x) {
    for (int is = 0; is < s1.grid().n_s; ++is) {
        s1.rho(it, is) = x.rho[is];
        s1.theta(it, is) = x.theta[is];
        s1.Omega(it, is) = x.Omega[is];
        s1.omega(it, is) = x.omega[is];
    }
}

}  // namespace

SimResult run(const SimConfig& cfg) {
    if (!cfg.init_file.empty()) return run_from(cfg, read_state_slice(cfg.init_file, cfg.grid.n_s));
    return run_from(cfg, preset_slice(cfg.preset, cfg.grid, cfg.params));
}

SimResult run_from(const SimConfig& cfg, const StateSlice& initial) {
    cfg.validate();
    const Grid2& g = cfg.grid;
    if (initial.size() != static_cast<std::size_t>(g.n_s)) {
        throw ConfigError("init", 0, "initial slice has " + std::to_string(initial.size()) + " nodes, grid has " +
                                         std::to_string(g.n_s));
    }
    SimResult result{Stage1Section{VecField(g), VecField(g), VecField(g), VecField(g)}, initial, {}};
    StateSlice x = initial;
    if (!(x.max_norm() <= kBlowupNorm)) throw Blowup(0, x.max_norm());
    store(result.section, 0, x);
    for (int it = 1; it < g.n_t; ++it) {
        x = advance(x, cfg);
        const double norm = x.max_norm();
        if (!(norm <= kBlowupNorm)) throw Blowup(static_cast<std::size_t>(it), norm);
        store(result.section, it, x);
    }
    result.final_state = std::move(x);
    result.diagnostics = diagnostics(result.section, cfg.params, cfg.reortho_every);
    return result;
}

std::vector<DiagnosticRow> diagnostics(const Stage1Section& s1, const ModelParams& p, int reortho_every) {
    const Grid2& g = s1.grid();
    const Stage1Residuals res = stage1_residuals(s1, p);
    const VecField flat_rot = flatness_residual_rotation(s1);
    const VecField flat_rotor = flatness_residual_rotor(project_stage2(s1));

    ConservedTotals totals;
    try {
        const RotField lambda = reconstruct_rotation(s1.Omega, s1.omega, Rot3::identity(),
                                                     std::numeric_limits<double>::infinity(),
                                                     {SweepOrder::RowFirst, reortho_every});
        totals = conserved_totals(s1, lambda, p);
    } catch (const StrandError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const CurrentPair rotor = rotor_current(s1, p);
        for (int it = 0; it < g.n_t; ++it) {
            totals.so3.push_back(Vec3::Constant(nan));
            totals.rotor.push_back(integrate_s(rotor.J_t, it));
        }
    }

    std::vector<DiagnosticRow> rows;
    rows.reserve(static_cast<std::size_t>(g.n_t));
    for (int it = 0; it < g.n_t; ++it) {
        DiagnosticRow row;
        row.t_index = it;
        row.t = g.t(it);
        row.interior = std::min(it, g.n_t - 1 - it) >= kInteriorBand;
        row.vertical = interior_max_norm_at(res.vertical, it);
        row.horizontal_rho = interior_max_norm_at(res.horizontal_rho, it);
        row.horizontal_theta = interior_max_norm_at(res.horizontal_theta, it);
        row.flatness_rotation = interior_max_norm_at(flat_rot, it, 1);
        row.flatness_rotor = interior_max_norm_at(flat_rotor, it, 1);
        row.so3_total = totals.so3[static_cast<std::size_t>(it)];
        row.rotor_total = totals.rotor[static_cast<std::size_t>(it)];
        rows.push_back(row);
    }
    return rows;
}

}  // namespace strand
