#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "strand/so3.hpp"

namespace strand {

enum class Boundary { Periodic, Clamped };

std::string to_string(Boundary bc);
Boundary parse_boundary(const std::string& name);

/**
 * Uniform grid over (t, s) in [0, T] x [0, L].
 *
 * Time is never periodic: t_k = k dt for k in [0, n_t). Along s, Clamped grids
 * include both ends (L = (n_s - 1) ds) while Periodic grids omit the duplicate
 * endpoint (L = n_s ds).
 */
struct Grid2 {
    int n_t = 0;
    int n_s = 0;
    double dt = 0.0;
    double ds = 0.0;
    Boundary bc_s = Boundary::Clamped;

    /// Validated constructor; throws InvalidArgument on bad sizes or spacings.
    static Grid2 make(int n_t, int n_s, double dt, double ds, Boundary bc_s);

    std::size_t size() const { return static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_s); }
    std::size_t index(int it, int is) const {
        return static_cast<std::size_t>(it) * static_cast<std::size_t>(n_s) + static_cast<std::size_t>(is);
    }
    double t(int it) const { return it * dt; }
    double s(int is) const { return is * ds; }
    double length() const { return bc_s == Boundary::Periodic ? n_s * ds : (n_s - 1) * ds; }
    double duration() const { return (n_t - 1) * dt; }
    bool periodic() const { return bc_s == Boundary::Periodic; }

    /// Distance (in nodes) to the nearest non-periodic boundary. Nodes at distance 0
    /// use one-sided first-derivative stencils; nodes at distance 1 see those values
    /// through composed second derivatives.
    int boundary_distance(int it, int is) const;

    bool operator==(const Grid2&) const = default;
};

/// Nodes at this distance or more from a boundary are "interior" for residuals.
inline constexpr int kInteriorBand = 2;

/// Second-order first-derivative stencil at one node of a 1-D line, weights
/// already divided by the spacing.
struct Stencil {
    std::array<int, 3> idx{};
    std::array<double, 3> w{};
    int n = 0;
};

/// Centered (interior or periodic) or 3-point one-sided (clamped ends) stencil.
Stencil derivative_stencil(int i, int n, double h, bool periodic);

template <class T>
class Field {
public:
    Field() = default;
    explicit Field(const Grid2& grid) : grid_(grid), values_(grid.size(), zero()) {}
    Field(const Grid2& grid, const T& fill) : grid_(grid), values_(grid.size(), fill) {}

    const Grid2& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    T& operator()(int it, int is) { return values_[grid_.index(it, is)]; }
    const T& operator()(int it, int is) const { return values_[grid_.index(it, is)]; }
    T& operator[](std::size_t k) { return values_[k]; }
    const T& operator[](std::size_t k) const { return values_[k]; }

    std::vector<T>& values() { return values_; }
    const std::vector<T>& values() const { return values_; }

private:
    static T zero() {
        if constexpr (std::is_same_v<T, double>) {
            return 0.0;
        } else if constexpr (std::is_same_v<T, Vec3>) {
            return Vec3::Zero();
        } else {
            return T{};
        }
    }

    Grid2 grid_{};
    std::vector<T> values_;
};

using ScalarField = Field<double>;
using VecField = Field<Vec3>;
using RotField = Field<Rot3>;

/// d/ds: centered in the interior, wrapped on Periodic grids, 3-point one-sided at
/// Clamped ends.
ScalarField d_s(const ScalarField& f);
VecField d_s(const VecField& f);

/// d/dt: as d_s along t; t-ends always use one-sided stencils.
ScalarField d_t(const ScalarField& f);
VecField d_t(const VecField& f);

/// Line integral over s at time level it: trapezoid on Clamped, equal weights on
/// Periodic.
double integrate_s(const ScalarField& f, int it);
Vec3 integrate_s(const VecField& f, int it);

/// Max of |f| over nodes with boundary_distance >= band.
double interior_max_norm(const VecField& f, int band = kInteriorBand);
/// Root mean square of |f| over nodes with boundary_distance >= band.
double interior_rms_norm(const VecField& f, int band = kInteriorBand);
/// Max of |f| over nodes with boundary_distance >= band on one time level.
double interior_max_norm_at(const VecField& f, int it, int band = kInteriorBand);

VecField operator+(const VecField& a, const VecField& b);
VecField operator-(const VecField& a, const VecField& b);
VecField operator*(double k, const VecField& a);

}  // namespace strand
