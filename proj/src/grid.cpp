#include "strand/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strand/errors.hpp"
#include "strand/parallel.hpp"

namespace strand {

std::string to_string(Boundary bc) { return bc == Boundary::Periodic ? "periodic" : "clamped"; }

Boundary parse_boundary(const std::string& name) {
    if (name == "periodic") return Boundary::Periodic;
    if (name == "clamped") return Boundary::Clamped;
    throw InvalidArgument("unknown boundary condition '" + name + "'");
}

Grid2 Grid2::make(int n_t, int n_s, double dt, double ds, Boundary bc_s) {
    if (n_t < 3 || n_s < 3) throw InvalidArgument("grid needs at least 3 nodes per direction");
    if (static_cast<double>(n_t) * static_cast<double>(n_s) > 1e8) {
        throw InvalidArgument("grid exceeds 1e8 nodes");
    }
    if (!(std::isfinite(dt) && dt > 0.0) || !(std::isfinite(ds) && ds > 0.0)) {
        throw InvalidArgument("grid spacings must be finite and positive");
    }
    return Grid2{n_t, n_s, dt, ds, bc_s};
}

int Grid2::boundary_distance(int it, int is) const {
    int d = std::min(it, n_t - 1 - it);
    if (!periodic()) d = std::min({d, is, n_s - 1 - is});
    return d;
}

Stencil derivative_stencil(int i, int n, double h, bool periodic) {
    Stencil st;
    const double inv = 1.0 / h;
    if (periodic || (i > 0 && i < n - 1)) {
        st.n = 2;
        st.idx = {periodic ? (i - 1 + n) % n : i - 1, periodic ? (i + 1) % n : i + 1, 0};
        st.w = {-0.5 * inv, 0.5 * inv, 0.0};
    } else if (i == 0) {
        st.n = 3;
        st.idx = {0, 1, 2};
        st.w = {-1.5 * inv, 2.0 * inv, -0.5 * inv};
    } else {
        st.n = 3;
        st.idx = {n - 1, n - 2, n - 3};
        st.w = {1.5 * inv, -2.0 * inv, 0.5 * inv};
    }
    return st;
}

namespace {

template <class T>
Field<T> apply_d_s(const Field<T>& f) {
    const Grid2& g = f.grid();
    Field<T> out(g);
    for (int is = 0; is < g.n_s; ++is) {
        const Stencil st = derivative_stencil(is, g.n_s, g.ds, g.periodic());
        for (int it = 0; it < g.n_t; ++it) {
            T acc = st.w[0] * f(it, st.idx[0]);
            for (int k = 1; k < st.n; ++k) acc += st.w[k] * f(it, st.idx[k]);
            out(it, is) = acc;
        }
    }
    return out;
}

template <class T>
Field<T> apply_d_t(const Field<T>& f) {
    const Grid2& g = f.grid();
    Field<T> out(g);
    for (int it = 0; it < g.n_t; ++it) {
        const Stencil st = derivative_stencil(it, g.n_t, g.dt, false);
        for (int is = 0; is < g.n_s; ++is) {
            T acc = st.w[0] * f(st.idx[0], is);
            for (int k = 1; k < st.n; ++k) acc += st.w[k] * f(st.idx[k], is);
            out(it, is) = acc;
        }
    }
    return out;
}

template <class T>
T apply_integrate_s(const Field<T>& f, int it) {
    const Grid2& g = f.grid();
    if (it < 0 || it >= g.n_t) throw InvalidArgument("time index out of range");
    T acc = f(it, 0);
    for (int is = 1; is < g.n_s; ++is) acc += f(it, is);
    if (!g.periodic()) acc -= 0.5 * (f(it, 0) + f(it, g.n_s - 1));
    return g.ds * acc;
}

}  // namespace

ScalarField d_s(const ScalarField& f) { return apply_d_s(f); }
VecField d_s(const VecField& f) { return apply_d_s(f); }
ScalarField d_t(const ScalarField& f) { return apply_d_t(f); }
VecField d_t(const VecField& f) { return apply_d_t(f); }

double integrate_s(const ScalarField& f, int it) { return apply_integrate_s(f, it); }
Vec3 integrate_s(const VecField& f, int it) { return apply_integrate_s(f, it); }

double interior_max_norm(const VecField& f, int band) {
    const Grid2& g = f.grid();
    double m = 0.0;
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            if (g.boundary_distance(it, is) >= band) m = std::max(m, f(it, is).norm());
        }
    }
    return m;
}

double interior_rms_norm(const VecField& f, int band) {
    const Grid2& g = f.grid();
    double sum = 0.0;
    std::size_t count = 0;
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            if (g.boundary_distance(it, is) >= band) {
                sum += f(it, is).squaredNorm();
                ++count;
            }
        }
    }
    return count == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(count));
}

double interior_max_norm_at(const VecField& f, int it, int band) {
    const Grid2& g = f.grid();
    double m = 0.0;
    for (int is = 0; is < g.n_s; ++is) {
        if (g.boundary_distance(it, is) >= band) m = std::max(m, f(it, is).norm());
    }
    return m;
}

namespace {
template <class Op>
VecField zip(const VecField& a, const VecField& b, Op op) {
    if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
    VecField out(a.grid());
    parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) out[k] = op(a[k], b[k]);
    });
    return out;
}
}  // namespace

VecField operator+(const VecField& a, const VecField& b) {
    return zip(a, b, [](const Vec3& x, const Vec3& y) -> Vec3 { return x + y; });
}
VecField operator-(const VecField& a, const VecField& b) {
    return zip(a, b, [](const Vec3& x, const Vec3& y) -> Vec3 { return x - y; });
}
VecField operator*(double k, const VecField& a) {
    VecField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = k * a[i];
    return out;
}

}  // namespace strand
