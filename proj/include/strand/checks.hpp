#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strand/residuals.hpp"
#include "strand/simulate.hpp"

namespace strand {

/// One verdict line: passes when value <= tolerance (NaN never passes).
struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Plain-text report: '#'-prefixed metadata lines followed by one
/// `name value tolerance verdict` line per check. Timing is deliberately not
/// part of it so that reports are reproducible byte for byte.
struct Report {
    std::vector<std::string> metadata;
    std::vector<CheckResult> checks;

    void note(const std::string& line) { metadata.push_back(line); }
    /// Adds value <= tolerance.
    void add(const std::string& name, double value, double tolerance);
    /// Adds a check whose verdict is decided by the caller (e.g. a range test).
    void add(const std::string& name, double value, double tolerance, bool pass);
    void append(const Report& other);
    bool passed() const;
    std::string text() const;
};

std::string grid_metadata(const Grid2& g);

/// Analytic fiber derivatives of the stage-1 Lagrangian against central
/// differences at n_points random points. Error measure: |fd - exact| / max(1, |exact|).
Report check_derivatives(const ModelParams& p, std::uint64_t seed = 1, int n_points = 100, double step = 1e-6);

/// Invariance of the unreduced Lagrangian, l o proj = L, and agreement of the
/// stage-1 and stage-2 residuals on matched random sections.
Report check_stages(std::uint64_t seed = 2, int n_points = 1000, int n_sections = 20, int n = 32);

/// Directional derivative of the discrete action against the residual pairing
/// on twist-pulse-shaped sections at n = 16, 32, 64.
struct VariationalLevel {
    int n = 0;
    double h = 0.0;
    double discrepancy = 0.0;
    double variation_norm = 0.0;
};
std::vector<VariationalLevel> variational_study(const ModelParams& p, std::vector<int> sizes = {16, 32, 64},
                                                std::uint64_t seed = 7);
Report check_variational(const ModelParams& p);

/// Reconstruction round trip on analytic lifts, path independence, NotFlat
/// rejection and lossless CSV serialisation.
Report check_roundtrip(std::uint64_t seed = 11);

/// Observed order between two successive measurements with spacing ratio r.
double observed_order(double coarse, double fine, double ratio = 2.0);
inline constexpr double kOrderLow = 1.7;
inline constexpr double kOrderHigh = 2.3;

struct ConvergenceLevel {
    Grid2 grid;
    ResidualNorms norms;
    double flatness = 0.0;
};

struct ConvergenceStudy {
    Preset preset = Preset::TwistPulse;
    std::vector<ConvergenceLevel> levels;
    std::vector<double> orders;  ///< of the largest interior residual norm, one per refinement
};

/// Configuration used for refinement studies; level 0 is (n_s, n_t) = (64, 200)
/// and each level halves ds and dt.
SimConfig convergence_config(Preset preset, int level, const ModelParams& p);
ConvergenceStudy convergence_study(Preset preset, int levels, const ModelParams& p);
/// Orders must fall in [1.7, 2.3]; a study whose residuals are already at
/// round-off (below 1e-12) passes trivially.
Report convergence_report(const ConvergenceStudy& study);

}  // namespace strand
