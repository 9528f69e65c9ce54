#include "strand/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>

#include "strand/checks.hpp"
#include "strand/config.hpp"
#include "strand/errors.hpp"
#include "strand/field_io.hpp"
#include "strand/noether.hpp"
#include "strand/synthetic.hpp"

namespace strand {

namespace fs = std::filesystem;

namespace {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Residual bound used when the caller gives none: C (dt^2 + ds^2) with C = 10,
// the size expected of a second-order consistent section.
double consistency_bound(const Grid2& g) { return 10.0 * (g.dt * g.dt + g.ds * g.ds); }

Rot3 parse_rotation(const std::string& text) {
    std::istringstream in(text);
    Mat3 m;
    for (int k = 0; k < 9; ++k) {
        if (!(in >> m(k / 3, k % 3))) throw InvalidArgument("--lambda0 needs nine reals (row-major)");
    }
    std::string extra;
    if (in >> extra) throw InvalidArgument("--lambda0 needs exactly nine reals");
    return Rot3::from_matrix(m);
}

// Parameters for a field directory: an explicit config wins, then the echo
// written by `simulate`, then the built-in defaults.
ModelParams params_for(const fs::path& dir, const std::string& config) {
    if (!config.empty()) return read_config(config).params;
    if (fs::exists(dir / "config.txt")) return read_config(dir / "config.txt").params;
    return default_params();
}

void add_norms(Report& r, const std::string& prefix, const ResidualNorms& n, double tol,
               const char* a = "vertical", const char* b = "horizontal_rho", const char* c = "horizontal_theta") {
    r.add(prefix + "." + a, n.vertical, tol);
    r.add(prefix + "." + b, n.horizontal_rho, tol);
    r.add(prefix + "." + c, n.horizontal_theta, tol);
}

Report residual_report(const Stage1Section& s1, const ModelParams& p, double tol) {
    Report r;
    r.note(grid_metadata(s1.grid()));
    const ResidualNorms reduced = interior_norms(stage1_residuals(s1, p));
    add_norms(r, "stage1", reduced, tol);
    add_norms(r, "stage2", interior_norms(stage2_residuals(project_stage2(s1), p)), tol);
    const VecField flat = flatness_residual_rotation(s1);
    r.add("flatness.rotation", interior_max_norm(flat), tol);
    const RotField lam = reconstruct_rotation(s1.Omega, s1.omega, Rot3::identity(), kUnbounded,
                                              {SweepOrder::RowFirst, 1, StepRule::Compatible});
    // The lifted section must be as close to stationary as the reduced one.
    const double lifted_tol = 4.0 * std::max(reduced.max(), 1e-12);
    add_norms(r, "unreduced", interior_norms(el_unreduced_residual(lift(s1, lam), p)), lifted_tol, "Lambda", "r",
              "theta");
    return r;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int finish(const Report& r, std::ostream& out, const Timer& timer) {
    out << r.text();
    out << "elapsed " << format_short(timer.seconds()) << " s\n";
    return r.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const std::string& config, const fs::path& dir, std::ostream& out) {
    const Timer timer;
    const SimConfig cfg = read_config(config);
    const SimResult res = run(cfg);
    write_fields(res.section, dir);
    write_tracked_file(dir, "diagnostics.csv", diagnostics_csv(res.diagnostics));
    write_tracked_file(dir, "config.txt", echo_config(cfg));
    write_tracked_file(dir, "final_state.csv", state_slice_csv(res.final_state));

    Report r;
    r.note("simulate preset=" + (cfg.init_file.empty() ? to_string(cfg.preset) : "file") +
           " scheme=" + to_string(cfg.scheme));
    r.note(grid_metadata(cfg.grid));
    const double tol = consistency_bound(cfg.grid);
    add_norms(r, "stage1", interior_norms(stage1_residuals(res.section, cfg.params)), tol);
    r.add("flatness.rotation", interior_max_norm(flatness_residual_rotation(res.section)), tol);
    r.add("flatness.rotor", interior_max_norm(flatness_residual_rotor(project_stage2(res.section))), tol);
    r.add("state.max_norm", res.final_state.max_norm(), 1e8);
    write_tracked_file(dir, "report.txt", r.text());
    out << r.text() << "wrote " << dir.string() << "\n";
    out << "elapsed " << format_short(timer.seconds()) << " s\n";
    // The verdicts document the run; a completed simulation is a success.
    return kExitOk;
}

int cmd_residuals(const std::string& in, const std::string& preset, const std::string& config, double tol,
                  std::ostream& out) {
    const Timer timer;
    Report r;
    if (!in.empty()) {
        const Stage1Section s1 = read_fields(in);
        const ModelParams p = params_for(in, config);
        r = residual_report(s1, p, std::isnan(tol) ? consistency_bound(s1.grid()) : tol);
        r.metadata.insert(r.metadata.begin(), "residuals in=" + in);
    } else {
        const ModelParams p = config.empty() ? default_params() : read_config(config).params;
        const SimConfig cfg = convergence_config(parse_preset(preset), 0, p);
        const SimResult res = run(cfg);
        r = residual_report(res.section, p, std::isnan(tol) ? consistency_bound(cfg.grid) : tol);
        r.metadata.insert(r.metadata.begin(), "residuals preset=" + preset);
    }
    return finish(r, out, timer);
}

int cmd_reconstruct(const std::string& in, const std::string& out_dir, const std::string& lambda0, double tol,
                    const std::string& order, const std::string& rule, std::ostream& out) {
    const Timer timer;
    const Stage1Section s1 = read_fields(in);
    ReconstructOptions opt;
    opt.order = order == "columns" ? SweepOrder::ColumnFirst : SweepOrder::RowFirst;
    opt.rule = rule == "compatible" ? StepRule::Compatible : StepRule::Midpoint;
    const RotField lam = reconstruct_rotation(s1.Omega, s1.omega, parse_rotation(lambda0), tol, opt);
    const fs::path target = out_dir.empty() ? fs::path(in) : fs::path(out_dir);
    if (!out_dir.empty()) write_fields(s1, target);
    write_rotation_field(lam, target);

    Report r;
    r.note("reconstruct in=" + in + " order=" + order + " rule=" + rule);
    r.note(grid_metadata(s1.grid()));
    r.add("flatness.rotation", interior_max_norm(flatness_residual_rotation(s1), 1), tol);
    double defect = 0.0;
    for (std::size_t k = 0; k < lam.size(); ++k) defect = std::max(defect, lam[k].orthogonality_defect());
    r.add("orthogonality_defect", defect, kRotationTolerance);
    out << "wrote " << (target / "Lambda.csv").string() << "\n";
    return finish(r, out, timer);
}

int cmd_noether(const std::string& in, const std::string& config, const std::string& out_dir, std::ostream& out) {
    const Timer timer;
    const Stage1Section s1 = read_fields(in);
    const ModelParams p = params_for(in, config);
    const Grid2& g = s1.grid();
    const RotField lam = reconstruct_rotation(s1.Omega, s1.omega, Rot3::identity(), kUnbounded);
    const CurrentPair so3 = so3_current(s1, lam, p);
    const CurrentPair rot = rotor_current(s1, p);
    const VecField div_so3 = divergence(so3);
    const VecField div_rot = divergence(rot);
    const ConservedTotals totals = conserved_totals(s1, lam, p);

    std::string csv = "t_index,t,so3_total1,so3_total2,so3_total3,rotor_total1,rotor_total2,rotor_total3,"
                      "so3_divergence_max,rotor_divergence_max\n";
    for (int it = 0; it < g.n_t; ++it) {
        csv += std::to_string(it) + ',' + format_real(g.t(it));
        for (int c = 0; c < 3; ++c) csv += ',' + format_real(totals.so3[static_cast<std::size_t>(it)][c]);
        for (int c = 0; c < 3; ++c) csv += ',' + format_real(totals.rotor[static_cast<std::size_t>(it)][c]);
        csv += ',' + format_real(interior_max_norm_at(div_so3, it)) + ',' + format_real(interior_max_norm_at(div_rot, it));
        csv += '\n';
    }
    const fs::path target = out_dir.empty() ? fs::path(in) : fs::path(out_dir);
    if (out_dir.empty()) {
        write_tracked_file(target, "noether.csv", csv);
    } else {
        fs::create_directories(target);
        write_text(target / "noether.csv", csv);
    }

    Report r;
    r.note("noether in=" + in);
    r.note(grid_metadata(g));
    const double tol = consistency_bound(g) * std::max(1.0, g.duration());
    r.add("so3.total_drift", totals.so3_drift(), tol);
    r.add("rotor.total_drift", totals.rotor_drift(), tol);
    r.add("so3.divergence", interior_max_norm(div_so3), consistency_bound(g));
    r.add("rotor.divergence", interior_max_norm(div_rot), consistency_bound(g));
    out << "wrote " << (target / "noether.csv").string() << "\n";
    return finish(r, out, timer);
}

// seed is empty when the suite's own default should be used.
int cmd_check(const std::string& suite, std::optional<std::uint64_t> seed, const std::string& report_path,
              std::ostream& out) {
    const Timer timer;
    Report r;
    if (suite == "derivatives") {
        r = check_derivatives(default_params(), seed.value_or(1));
    } else if (suite == "stages") {
        r = check_stages(seed.value_or(2));
    } else if (suite == "variational") {
        r = check_variational(default_params());
    } else {
        r = check_roundtrip(seed.value_or(11));
    }
    if (!report_path.empty()) write_text(report_path, r.text());
    return finish(r, out, timer);
}

int cmd_convergence(const std::string& preset, int levels, const std::string& report_path, std::ostream& out) {
    const Timer timer;
    const Report r = convergence_report(convergence_study(parse_preset(preset), levels, default_params()));
    if (!report_path.empty()) write_text(report_path, r.text());
    return finish(r, out, timer);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"strand-reduce: reduced field equations of a molecular strand with rotors"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;
    std::string in_dir;
    std::string preset;
    std::string lambda0 = "1 0 0 0 1 0 0 0 1";
    std::string order = "rows";
    std::string rule = "midpoint";
    std::string suite;
    std::string report_path;
    double tol = std::numeric_limits<double>::quiet_NaN();
    double recon_tol = 1e-2;
    int levels = 3;
    std::uint64_t seed = 1;

    auto* sim = app.add_subcommand("simulate", "integrate a configuration and write fields, diagnostics and report");
    sim->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out_dir, "output directory")->required();

    auto* res = app.add_subcommand("residuals", "interior norms of the stage-1, stage-2 and unreduced residuals");
    auto* res_in = res->add_option("--in", in_dir, "field directory written by simulate")->check(CLI::ExistingDirectory);
    auto* res_preset = res->add_option("--preset", preset, "simulate a preset at the base resolution instead");
    res_in->excludes(res_preset);
    res->add_option("--config", config, "configuration supplying model parameters");
    res->add_option("--tol", tol, "tolerance for every norm (default 10 (dt^2 + ds^2))");

    auto* rec = app.add_subcommand("reconstruct", "recover the frame field Lambda from Omega and omega");
    rec->add_option("--in", in_dir, "field directory")->required()->check(CLI::ExistingDirectory);
    rec->add_option("--out", out_dir, "write Lambda.csv here instead of into --in");
    rec->add_option("--lambda0", lambda0, "initial frame, nine reals row-major");
    rec->add_option("--tol", recon_tol, "largest admissible flatness residual");
    rec->add_option("--order", order, "sweep order")->check(CLI::IsMember({"rows", "columns"}));
    rec->add_option("--rule", rule, "increment rule")->check(CLI::IsMember({"midpoint", "compatible"}));

    auto* noe = app.add_subcommand("noether", "Noether currents, divergences and conserved totals");
    noe->add_option("--in", in_dir, "field directory")->required()->check(CLI::ExistingDirectory);
    noe->add_option("--config", config, "configuration supplying model parameters");
    noe->add_option("--out", out_dir, "write noether.csv here instead of into --in");

    auto* chk = app.add_subcommand("check", "property suites; exit code 4 on failure");
    chk->add_option("suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"derivatives", "stages", "variational", "roundtrip"}));
    chk->add_option("--seed", seed, "random seed (default: the suite's own)");
    chk->add_option("--report", report_path, "also write the report to this file");

    auto* conv = app.add_subcommand("convergence", "refinement table of residual norms and observed orders");
    conv->add_option("--preset", preset, "preset name")->required();
    conv->add_option("--levels", levels, "number of levels")->check(CLI::Range(2, 6));
    conv->add_option("--report", report_path, "also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(config, out_dir, out);
        if (*res) {
            if (in_dir.empty() && preset.empty()) throw ConfigError("residuals", 0, "give --in DIR or --preset NAME");
            return cmd_residuals(in_dir, preset, config, tol, out);
        }
        if (*rec) return cmd_reconstruct(in_dir, out_dir, lambda0, recon_tol, order, rule, out);
        if (*noe) return cmd_noether(in_dir, config, out_dir, out);
        if (*chk) {
            return cmd_check(suite, chk->count("--seed") ? std::optional<std::uint64_t>(seed) : std::nullopt,
                             report_path, out);
        }
        if (*conv) return cmd_convergence(preset, levels, report_path, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnknownPreset& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NotFlat& e) {
        err << "error: " << e.what() << "\n";
        return kExitNotFlat;
    } catch (const Blowup& e) {
        err << "error: " << e.what() << "\n";
        return kExitBlowup;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace strand
