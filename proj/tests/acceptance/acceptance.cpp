// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "strand/checks.hpp"
#include "strand/cli.hpp"
#include "strand/errors.hpp"
#include "strand/field_io.hpp"
#include "strand/noether.hpp"
#include "strand/residuals.hpp"
#include "strand/simulate.hpp"
#include "strand/synthetic.hpp"

using namespace strand;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int g_failures = 0;

void verdict(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("criterion %d %-28s %s  %s\n", id, title.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

// Runs one criterion, turning an unexpected exception into a FAIL line.
void criterion(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        verdict(id, title, pass, detail);
    } catch (const std::exception& e) {
        verdict(id, title, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double x) { return format_short(x); }

bool in_order_range(double order) { return order >= kOrderLow && order <= kOrderHigh; }

const CheckResult& find_check(const Report& r, const std::string& name) {
    for (const CheckResult& c : r.checks)
        if (c.name == name) return c;
    throw InvalidArgument("report has no check named " + name);
}

std::pair<bool, std::string> summarize(const Report& r, const std::vector<std::string>& prefixes) {
    bool pass = true;
    std::string detail;
    for (const CheckResult& c : r.checks) {
        bool wanted = false;
        for (const std::string& p : prefixes) wanted = wanted || c.name.rfind(p, 0) == 0;
        if (!wanted) continue;
        pass = pass && c.pass;
        detail += c.name + "=" + fmt(c.value) + (c.pass ? "" : "(!)") + " ";
    }
    return {pass, detail};
}

// Independent rigid body with rotors: ρ, u = ρ_t, ω, rotor rate v and rotor angle θ.
// The three balance laws are assembled as one 9x9 linear system in the
// accelerations (u_t, ω_t, v_t) and solved directly at every stage:
//   u_t - ρ^ ω_t                                  = ω × (ρ × ω - 2u)
//   ρ^ u_t + ((I+K) - ρ^ρ^) ω_t + K v_t           = -ρ × (2ω × u + <ω,ρ> ω) - ω × ((I+K) ω + K v)
//   K ω_t + K v_t                                 = 0
struct RigidState {
    Vec3 rho, u, omega, v, theta;
};

RigidState rigid_rate(const RigidState& y, const Mat3& I, const Mat3& K) {
    using Mat9 = Eigen::Matrix<double, 9, 9>;
    using Vec9 = Eigen::Matrix<double, 9, 1>;
    const Mat3 R = hat(y.rho);
    Mat9 A = Mat9::Zero();
    Vec9 b;
    A.block<3, 3>(0, 0) = Mat3::Identity();
    A.block<3, 3>(0, 3) = -R;
    A.block<3, 3>(3, 0) = R;
    A.block<3, 3>(3, 3) = I + K - R * R;
    A.block<3, 3>(3, 6) = K;
    A.block<3, 3>(6, 3) = K;
    A.block<3, 3>(6, 6) = K;
    b.segment<3>(0) = y.omega.cross(y.rho.cross(y.omega) - 2.0 * y.u);
    b.segment<3>(3) = -y.rho.cross(2.0 * y.omega.cross(y.u) + y.omega.dot(y.rho) * y.omega) -
                      y.omega.cross((I + K) * y.omega + K * y.v);
    b.segment<3>(6).setZero();
    const Vec9 acc = A.partialPivLu().solve(b);
    return {y.u, acc.segment<3>(0), acc.segment<3>(3), acc.segment<3>(6), y.v};
}

RigidState axpy(const RigidState& y, double h, const RigidState& k) {
    return {y.rho + h * k.rho, y.u + h * k.u, y.omega + h * k.omega, y.v + h * k.v, y.theta + h * k.theta};
}

RigidState rk4_step(const RigidState& y, double h, const Mat3& I, const Mat3& K) {
    const RigidState k1 = rigid_rate(y, I, K);
    const RigidState k2 = rigid_rate(axpy(y, 0.5 * h, k1), I, K);
    const RigidState k3 = rigid_rate(axpy(y, 0.5 * h, k2), I, K);
    const RigidState k4 = rigid_rate(axpy(y, h, k3), I, K);
    RigidState out = y;
    out = axpy(out, h / 6.0, k1);
    out = axpy(out, h / 3.0, k2);
    out = axpy(out, h / 3.0, k3);
    out = axpy(out, h / 6.0, k4);
    return out;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"strand-reduce"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

int main() {
    const auto t_start = Clock::now();
    const ModelParams p = default_params();

    criterion(1, "fiber derivatives", [&] {
        const auto t0 = Clock::now();
        const Report r = check_derivatives(p, 1, 100, 1e-6);
        const double elapsed = seconds_since(t0);
        auto [pass, detail] = summarize(r, {"fiber_derivative."});
        return std::make_pair(pass && elapsed < 1.0, detail + "time=" + fmt(elapsed) + "s");
    });

    // Both criteria 2 and 3 come from the stage suite.
    Report stages;
    const auto t_stages = Clock::now();
    try {
        stages = check_stages(2, 1000, 20, 32);
    } catch (const std::exception& e) {
        stages.add("stage_suite_exception", 1.0, 0.0);
        std::fprintf(stderr, "stage suite: %s\n", e.what());
    }
    const double stages_time = seconds_since(t_stages);
    criterion(2, "lagrangian invariance", [&] {
        return summarize(stages, {"lagrangian_invariance", "projection_identity", "stage_suite_exception"});
    });
    criterion(3, "stage equivalence", [&] {
        auto [pass, detail] = summarize(stages, {"stage1_vs_stage2", "stage_suite_exception"});
        return std::make_pair(pass, detail + "time=" + fmt(stages_time) + "s");
    });

    criterion(4, "variational consistency", [&] {
        const auto t0 = Clock::now();
        const std::vector<VariationalLevel> levels = variational_study(p, {16, 32, 64}, 7);
        const double elapsed = seconds_since(t0);
        bool pass = elapsed < 10.0;
        std::string detail;
        for (const VariationalLevel& l : levels) {
            // C = 1: the discrepancy must stay below h^2 times the variation norm.
            const bool ok = l.discrepancy <= l.h * l.h * l.variation_norm;
            pass = pass && ok;
            detail += "n" + std::to_string(l.n) + ":|fd-pair|/(h^2|var|)=" +
                      fmt(l.discrepancy / (l.h * l.h * l.variation_norm)) + " ";
        }
        for (std::size_t k = 1; k < levels.size(); ++k) {
            const double order = observed_order(levels[k - 1].discrepancy / levels[k - 1].variation_norm,
                                                levels[k].discrepancy / levels[k].variation_norm,
                                                levels[k - 1].h / levels[k].h);
            pass = pass && in_order_range(order);
            detail += "order=" + fmt(order) + " ";
        }
        return std::make_pair(pass, detail + "time=" + fmt(elapsed) + "s");
    });

    criterion(5, "reduction equivalence", [&] {
        std::array<double, 2> reduced{}, unreduced{}, h{};
        bool pass = true;
        std::string detail;
        for (int level = 0; level < 2; ++level) {
            const SimConfig cfg = convergence_config(Preset::TwistPulse, level, p);
            const SimResult res = run(cfg);
            const Stage1Section& s1 = res.section;
            const RotField lambda = reconstruct_rotation(s1.Omega, s1.omega, Rot3::identity(), 1.0,
                                                         {SweepOrder::RowFirst, 1, StepRule::Compatible});
            reduced[level] = interior_norms(stage1_residuals(s1, p)).max();
            unreduced[level] = interior_norms(el_unreduced_residual(lift(s1, lambda), p)).max();
            h[level] = cfg.grid.ds;
            const double ratio = unreduced[level] / reduced[level];
            pass = pass && ratio <= 4.0;
            detail += "(" + std::to_string(cfg.grid.n_s) + "x" + std::to_string(cfg.grid.n_t) +
                      ") stage1=" + fmt(reduced[level]) + " unreduced=" + fmt(unreduced[level]) +
                      " ratio=" + fmt(ratio) + " ";
        }
        const double o_red = observed_order(reduced[0], reduced[1], h[0] / h[1]);
        const double o_un = observed_order(unreduced[0], unreduced[1], h[0] / h[1]);
        pass = pass && in_order_range(o_red) && in_order_range(o_un);
        return std::make_pair(pass, detail + "orders=" + fmt(o_red) + "/" + fmt(o_un));
    });

    criterion(6, "reconstruction", [&] {
        const Report r = check_roundtrip(11);
        return summarize(r, {"path_independence", "rates_roundtrip", "nonflat_rejected"});
    });

    criterion(7, "noether conservation", [&] {
        // Periodic strand whose twist closes up after one turn; tilted principal
        // axes make the motion fully three-dimensional.
        const ModelParams q = anisotropic_params();
        const double L = closed_twist_length();
        const double T = 5.0;
        std::array<double, 2> so3{}, rotor{};
        double identity_gap = 0.0;
        std::string detail;
        for (int level = 0; level < 2; ++level) {
            const int n_s = 64 << level;
            const int n_t = (29 << level) + 1;
            SimConfig cfg;
            cfg.grid = Grid2::make(n_t, n_s, T / (n_t - 1), L / n_s, Boundary::Periodic);
            cfg.params = q;
            cfg.preset = Preset::TwistPulse;
            cfg.validate();
            const SimResult res = run(cfg);
            const Stage1Section& s1 = res.section;
            const RotField lambda = reconstruct_rotation(s1.Omega, s1.omega, Rot3::identity(), 1.0);
            const ConservedTotals tot = conserved_totals(s1, lambda, q);
            so3[level] = tot.so3_drift();
            rotor[level] = tot.rotor_drift();
            detail += "(" + std::to_string(n_s) + "x" + std::to_string(n_t) + ") so3=" + fmt(so3[level]) +
                      " rotor=" + fmt(rotor[level]) + " ";

            const Stage1Derivatives d = stage1_derivatives(s1, q);
            const Stage1Residuals r = residual_kernel(s1.rho, s1.Omega, s1.omega, d, q);
            const VecField drift = drift_residual_pointwise(s1, lambda, d, q);
            double scale = 1.0;
            for (std::size_t k = 0; k < drift.size(); ++k) {
                identity_gap = std::max(identity_gap, (drift[k] - lambda[k] * r.vertical[k]).norm());
                scale = std::max(scale, r.vertical[k].norm());
            }
            identity_gap /= scale;
        }
        const double decay_so3 = so3[0] / so3[1];
        const double decay_rotor = rotor[0] / rotor[1];
        const bool pass = decay_so3 >= 3.0 && decay_so3 <= 5.0 && decay_rotor >= 3.0 && decay_rotor <= 5.0 &&
                          identity_gap <= 1e-12;
        return std::make_pair(pass, detail + "decay=" + fmt(decay_so3) + "/" + fmt(decay_rotor) +
                                        " identity=" + fmt(identity_gap));
    });

    criterion(8, "rigid-body limit", [&] {
        SimConfig cfg;
        cfg.params = ModelParams::make(p.inertia_body, p.inertia_rotor, Mat3::Zero(), Mat3::Zero(), 0.0, p.pot_c0);
        cfg.preset = Preset::RigidBody;
        const double dt = 1e-3;
        const int n_t = 10001;
        cfg.grid = Grid2::make(n_t, 8, dt, 1.0 / 8, Boundary::Periodic);
        const StateSlice x0 = preset_slice(cfg.preset, cfg.grid, cfg.params);
        const SimResult res = run_from(cfg, x0);

        RigidState y{x0.rho[0], x0.u[0], x0.omega[0], x0.v[0], x0.theta[0]};
        double worst = 0.0;
        const auto compare = [&](int it) {
            for (int is = 0; is < cfg.grid.n_s; ++is) {
                worst = std::max({worst, (res.section.rho(it, is) - y.rho).norm(),
                                  (res.section.omega(it, is) - y.omega).norm(),
                                  (res.section.theta(it, is) - y.theta).norm(), res.section.Omega(it, is).norm()});
            }
        };
        compare(0);
        for (int it = 1; it < n_t; ++it) {
            y = rk4_step(y, dt, cfg.params.inertia_body, cfg.params.inertia_rotor);
            compare(it);
        }
        for (std::size_t i = 0; i < res.final_state.size(); ++i) {
            worst = std::max({worst, (res.final_state.u[i] - y.u).norm(), (res.final_state.v[i] - y.v).norm()});
        }
        return std::make_pair(worst <= 1e-10, "max nodewise deviation=" + fmt(worst) + " over T=10");
    });

    criterion(9, "end-to-end determinism", [&] {
        const fs::path root = fs::temp_directory_path() / "strand_acceptance_determinism";
        fs::remove_all(root);
        fs::create_directories(root);
        write_text(root / "run.cfg",
                   "[grid]\nn_s = 64\nn_t = 200\nlength = 1\nduration = 1.5\nbc = clamped\n"
                   "[inertia]\nI = diag 1 1.5 2\nK = diag 0.3 0.2 0.4\n"
                   "[potential]\nC = diag 1 1 0.5\nD = diag 0.2 0.2 0.2\nkappa = 1\nc0 = 1\n"
                   "[init]\npreset = twistpulse\n");
        const int a = run_cli({"simulate", "--config", (root / "run.cfg").string(), "--out", (root / "a").string()});
        const int b = run_cli({"simulate", "--config", (root / "run.cfg").string(), "--out", (root / "b").string()});
        bool same = a == kExitOk && b == kExitOk;
        int files = 0;
        for (const auto& entry : fs::directory_iterator(root / "a")) {
            const fs::path other = root / "b" / entry.path().filename();
            same = same && fs::exists(other) && read_text(entry.path()) == read_text(other);
            ++files;
        }
        const double total = seconds_since(t_start);
        return std::make_pair(same && files > 0 && total < 60.0,
                              std::to_string(files) + " files byte-identical=" + (same ? "yes" : "no") +
                                  " battery time=" + fmt(total) + "s");
    });

    std::printf("acceptance: %d failure(s), %.2f s\n", g_failures, seconds_since(t_start));
    return g_failures == 0 ? 0 : 1;
}
