#include "strand/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "strand/errors.hpp"
#include "strand/field_io.hpp"
#include "strand/synthetic.hpp"

namespace strand {

void Report::add(const std::string& name, double value, double tolerance) {
    add(name, value, tolerance, value <= tolerance);
}

void Report::add(const std::string& name, double value, double tolerance, bool pass) {
    checks.push_back({name, value, tolerance, pass && !std::isnan(value)});
}

void Report::append(const Report& other) {
    metadata.insert(metadata.end(), other.metadata.begin(), other.metadata.end());
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string Report::text() const {
    std::string out;
    for (const std::string& m : metadata) out += "# " + m + "\n";
    for (const CheckResult& c : checks) {
        out += c.name + " " + format_real(c.value) + " " + format_short(c.tolerance) + " " +
               (c.pass ? "PASS" : "FAIL") + "\n";
    }
    return out;
}

std::string grid_metadata(const Grid2& g) {
    return "grid n_t=" + std::to_string(g.n_t) + " n_s=" + std::to_string(g.n_s) + " dt=" + format_real(g.dt) +
           " ds=" + format_real(g.ds) + " bc=" + to_string(g.bc_s);
}

Report check_derivatives(const ModelParams& p, std::uint64_t seed, int n_points, double step) {
    std::mt19937_64 rng(seed);
    const auto l = [&p](const Stage1Point& x) { return lagrangian_stage1(x, p); };
    constexpr Slot kSlots[] = {Slot::Rho, Slot::RhoT, Slot::ThetaS, Slot::ThetaT, Slot::OmegaS, Slot::OmegaT};
    double worst[6] = {};
    double worst_dE = 0.0;
    for (int k = 0; k < n_points; ++k) {
        const Stage1Point pt = random_stage1_point(rng);
        const FiberDerivatives exact = fiber_derivatives_stage1(pt, p);
        for (int j = 0; j < 6; ++j) {
            const Vec3 fd = fd_fiber_derivative(l, pt, kSlots[j], step);
            const Vec3& ex = slot_value(exact, kSlots[j]);
            worst[j] = std::max(worst[j], (fd - ex).norm() / std::max(1.0, ex.norm()));
        }
        // The potential gradient is checked on its own so a sign slip there
        // is not masked by kinetic terms.
        const double c = pt.rho.squaredNorm();
        const PotentialGradient g = dE(pt.Omega, pt.theta_s, c, p);
        const Vec3 fd_W = fd_gradient([&](const Vec3& W) { return potential_E(W, pt.theta_s, c, p); }, pt.Omega, step);
        const Vec3 fd_a = fd_gradient([&](const Vec3& a) { return potential_E(pt.Omega, a, c, p); }, pt.theta_s, step);
        const double fd_c = (potential_E(pt.Omega, pt.theta_s, c + step, p) -
                             potential_E(pt.Omega, pt.theta_s, c - step, p)) / (2.0 * step);
        worst_dE = std::max({worst_dE, (fd_W - g.dOmega).norm() / std::max(1.0, g.dOmega.norm()),
                             (fd_a - g.da).norm() / std::max(1.0, g.da.norm()),
                             std::abs(fd_c - g.dc) / std::max(1.0, std::abs(g.dc))});
    }
    Report r;
    r.note("suite derivatives points=" + std::to_string(n_points) + " step=" + format_short(step));
    for (int j = 0; j < 6; ++j) r.add(std::string("fiber_derivative.") + slot_name(kSlots[j]), worst[j], 1e-7);
    r.add("potential_gradient", worst_dE, 1e-7);
    return r;
}

Report check_stages(std::uint64_t seed, int n_points, int n_sections, int n) {
    std::mt19937_64 rng(seed);
    const ModelParams p = random_params(rng);
    double invariance = 0.0;
    double projection = 0.0;
    for (int k = 0; k < n_points; ++k) {
        const UnreducedPoint pt = random_unreduced_point(rng);
        const double L = lagrangian_unreduced(pt, p);
        const double scale = 1.0 + std::abs(L);
        invariance = std::max(invariance, std::abs(lagrangian_unreduced(act_point(pt, random_rotation(rng)), p) - L) / scale);
        projection = std::max(projection, std::abs(lagrangian_stage1(project_point(pt), p) - L) / scale);
    }

    double stage_gap = 0.0;
    const Grid2 g = Grid2::make(n, n, 1.0 / (n - 1), 1.0 / (n - 1), Boundary::Clamped);
    for (int k = 0; k < n_sections; ++k) {
        const ModelParams q = random_params(rng);
        const Stage1Section s1 = project_stage1(AnalyticLift::random(rng, g).sample(g));
        const Stage1Residuals r1 = stage1_residuals(s1, q);
        const Stage1Residuals r2 = stage2_residuals(project_stage2(s1), q);
        const ResidualNorms gap = interior_norms(
            Stage1Residuals{r1.vertical - r2.vertical, r1.horizontal_rho - r2.horizontal_rho,
                            r1.horizontal_theta - r2.horizontal_theta, r1.one_sided});
        stage_gap = std::max(stage_gap, gap.max());
    }

    Report r;
    r.note("suite stages points=" + std::to_string(n_points) + " sections=" + std::to_string(n_sections) +
           " n=" + std::to_string(n));
    r.add("lagrangian_invariance", invariance, 1e-12);
    r.add("projection_identity", projection, 1e-12);
    r.add("stage1_vs_stage2", stage_gap, 1e-12);
    return r;
}

double observed_order(double coarse, double fine, double ratio) { return std::log(coarse / fine) / std::log(ratio); }

std::vector<VariationalLevel> variational_study(const ModelParams& p, std::vector<int> sizes, std::uint64_t seed) {
    std::vector<VariationalLevel> out;
    for (int n : sizes) {
        const Grid2 g = Grid2::make(n, n, 1.0 / (n - 1), 1.0 / (n - 1), Boundary::Clamped);
        const Stage1Section s1 = twist_pulse_section(g, p);
        const VariationSpec var = smooth_variation(g, seed);
        const GradientCheck gc = action_gradient_check(s1, var, p);
        out.push_back({n, g.ds, std::abs(gc.fd_derivative - gc.residual_pairing), var.norm()});
    }
    return out;
}

Report check_variational(const ModelParams& p) {
    const auto levels = variational_study(p);
    Report r;
    r.note("suite variational sizes=16,32,64");
    // C is fixed in advance; observed values are about 0.12.
    constexpr double kConstant = 1.0;
    for (const auto& lv : levels) {
        r.add("action_gradient.n" + std::to_string(lv.n), lv.discrepancy,
              kConstant * lv.h * lv.h * lv.variation_norm);
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const double order = observed_order(levels[k - 1].discrepancy, levels[k].discrepancy,
                                            levels[k - 1].h / levels[k].h);
        r.add("action_gradient.order" + std::to_string(levels[k - 1].n) + "_" + std::to_string(levels[k].n), order,
              kOrderHigh, order >= kOrderLow && order <= kOrderHigh);
    }
    return r;
}

Report check_roundtrip(std::uint64_t seed) {
    Report r;
    r.note("suite roundtrip sizes=16,32,64");
    double prev_err = 0.0;
    double prev_h = 0.0;
    for (int n : {16, 32, 64}) {
        const Grid2 g = Grid2::make(n, n, 1.0 / (n - 1), 1.0 / (n - 1), Boundary::Clamped);
        std::mt19937_64 rng(seed);
        const AnalyticLift al = AnalyticLift::random(rng, g);
        const Stage1Section exact = al.exact_stage1(g);
        const Rot3 lambda0 = exp_so3(al.phi.value(0.0, 0.0));
        const RotField lam = reconstruct_rotation(exact.Omega, exact.omega, lambda0, 1.0);
        const double err = std::max(interior_max_norm(group_derivative_s(lam) - exact.Omega, 0),
                                    interior_max_norm(group_derivative_t(lam) - exact.omega, 0));
        const double flat = interior_max_norm(flatness_residual_rotation(exact.Omega, exact.omega), 1);
        const double defect = path_independence_defect(exact.Omega, exact.omega, lambda0, 1.0);
        r.add("path_independence.n" + std::to_string(n), defect, 10.0 * flat + g.ds * g.ds);
        if (prev_err > 0.0) {
            const double order = observed_order(prev_err, err, prev_h / g.ds);
            r.add("rates_roundtrip.order_n" + std::to_string(n), order, kOrderHigh,
                  order >= kOrderLow && order <= kOrderHigh);
        }
        prev_err = err;
        prev_h = g.ds;
    }

    // A constant non-commuting pair is not flat and must be refused.
    const Grid2 g = Grid2::make(8, 8, 0.1, 0.1, Boundary::Clamped);
    VecField Omega(g);
    VecField omega(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        Omega[k] = Vec3::UnitX();
        omega[k] = Vec3::UnitY();
    }
    bool refused = false;
    try {
        reconstruct_rotation(Omega, omega, Rot3::identity(), 1e-6);
    } catch (const NotFlat&) {
        refused = true;
    }
    r.add("nonflat_rejected", refused ? 0.0 : 1.0, 0.0);

    // 17 significant digits: text -> field -> text is the identity.
    std::mt19937_64 rng(seed);
    const Grid2 gf = Grid2::make(5, 7, 0.1, 0.2, Boundary::Periodic);
    VecField f(gf);
    for (std::size_t k = 0; k < gf.size(); ++k) f[k] = random_vec(rng, 1e3);
    const std::string once = field_csv(f);
    const std::string twice = field_csv(parse_vec_field_csv(once, gf, "memory"));
    double worst = 0.0;
    const VecField back = parse_vec_field_csv(once, gf, "memory");
    for (std::size_t k = 0; k < gf.size(); ++k) worst = std::max(worst, (back[k] - f[k]).cwiseAbs().maxCoeff());
    r.add("csv_roundtrip_bits", (once == twice && worst == 0.0) ? 0.0 : 1.0, 0.0);
    return r;
}

SimConfig convergence_config(Preset preset, int level, const ModelParams& p) {
    const bool periodic = preset == Preset::RigidBody || preset == Preset::Helix;
    const int scale = 1 << level;
    const int n_s = periodic ? 64 * scale : 63 * scale + 1;
    const int n_t = 199 * scale + 1;
    const double length = 1.0;
    const double duration = 1.5;
    SimConfig cfg;
    cfg.grid = Grid2::make(n_t, n_s, duration / (n_t - 1), periodic ? length / n_s : length / (n_s - 1),
                           periodic ? Boundary::Periodic : Boundary::Clamped);
    cfg.params = p;
    cfg.preset = preset;
    return cfg;
}

ConvergenceStudy convergence_study(Preset preset, int levels, const ModelParams& p) {
    if (levels < 2) throw InvalidArgument("a convergence study needs at least two levels");
    ConvergenceStudy study;
    study.preset = preset;
    for (int l = 0; l < levels; ++l) {
        const SimConfig cfg = convergence_config(preset, l, p);
        cfg.validate();
        const SimResult res = run(cfg);
        ConvergenceLevel lv{cfg.grid, interior_norms(stage1_residuals(res.section, p)),
                            interior_max_norm(flatness_residual_rotation(res.section))};
        if (!study.levels.empty()) {
            const ConvergenceLevel& prev = study.levels.back();
            study.orders.push_back(observed_order(prev.norms.max(), lv.norms.max(), prev.grid.dt / lv.grid.dt));
        }
        study.levels.push_back(lv);
    }
    return study;
}

Report convergence_report(const ConvergenceStudy& study) {
    constexpr double kRoundOff = 1e-12;
    Report r;
    r.note("suite convergence preset=" + to_string(study.preset) + " levels=" + std::to_string(study.levels.size()));
    for (std::size_t l = 0; l < study.levels.size(); ++l) {
        const ConvergenceLevel& lv = study.levels[l];
        r.note("level " + std::to_string(l) + " " + grid_metadata(lv.grid) +
               " vertical=" + format_real(lv.norms.vertical) + " horizontal_rho=" + format_real(lv.norms.horizontal_rho) +
               " horizontal_theta=" + format_real(lv.norms.horizontal_theta) + " flatness=" + format_real(lv.flatness));
    }
    for (std::size_t k = 0; k < study.orders.size(); ++k) {
        const std::string name = "order.level" + std::to_string(k) + "_" + std::to_string(k + 1);
        const bool exact = study.levels[k].norms.max() <= kRoundOff && study.levels[k + 1].norms.max() <= kRoundOff;
        const double order = study.orders[k];
        r.add(name, exact ? 0.0 : order, kOrderHigh, exact || (order >= kOrderLow && order <= kOrderHigh));
    }
    return r;
}

}  // namespace strand
