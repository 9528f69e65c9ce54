#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "strand/errors.hpp"
#include "strand/grid.hpp"

using namespace strand;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
ScalarField sample(const Grid2& g, F f) {
    ScalarField out(g);
    for (int it = 0; it < g.n_t; ++it)
        for (int is = 0; is < g.n_s; ++is) out(it, is) = f(g.t(it), g.s(is));
    return out;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST(Grid, MakeValidates) {
    EXPECT_THROW(Grid2::make(0, 4, 0.1, 0.1, Boundary::Clamped), InvalidArgument);
    EXPECT_THROW(Grid2::make(4, 4, -0.1, 0.1, Boundary::Clamped), InvalidArgument);
    EXPECT_THROW(Grid2::make(4, 4, 0.1, 0.0, Boundary::Periodic), InvalidArgument);
    const Grid2 g = Grid2::make(5, 4, 0.25, 0.5, Boundary::Periodic);
    EXPECT_DOUBLE_EQ(g.length(), 2.0);
    EXPECT_DOUBLE_EQ(g.duration(), 1.0);
    EXPECT_EQ(g.index(1, 2), 6u);
}

TEST(Grid, ConstantHasZeroDerivatives) {
    for (Boundary bc : {Boundary::Clamped, Boundary::Periodic}) {
        const Grid2 g = Grid2::make(7, 9, 0.1, 0.2, bc);
        const VecField c(g, Vec3(1.5, -2, 3));
        for (const Vec3& x : d_s(c).values()) EXPECT_LT(x.norm(), 1e-12);
        for (const Vec3& x : d_t(c).values()) EXPECT_LT(x.norm(), 1e-12);
    }
}

TEST(Grid, ExactOnAffineAndQuadratic) {
    const Grid2 g = Grid2::make(11, 13, 0.1, 1.0 / 12.0, Boundary::Clamped);
    const ScalarField s_lin = d_s(sample(g, [](double, double s) { return s; }));
    for (double x : s_lin.values()) EXPECT_NEAR(x, 1.0, 1e-12);
    const ScalarField t_sq = d_t(sample(g, [](double t, double) { return t * t; }));
    EXPECT_LT(max_abs_diff(t_sq, sample(g, [](double t, double) { return 2 * t; })), 1e-12);
    const ScalarField s_sq = d_s(sample(g, [](double, double s) { return s * s; }));
    EXPECT_LT(max_abs_diff(s_sq, sample(g, [](double, double s) { return 2 * s; })), 1e-12);
}

TEST(Grid, PeriodicSineConvergesAtSecondOrder) {
    const double L = 3.0;
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        const Grid2 g = Grid2::make(3, n, 1.0, L / n, Boundary::Periodic);
        const ScalarField f = sample(g, [&](double, double s) { return std::sin(kTwoPi * s / L); });
        const ScalarField exact = sample(g, [&](double, double s) { return kTwoPi / L * std::cos(kTwoPi * s / L); });
        const double err = max_abs_diff(d_s(f), exact);
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 3.8);
            EXPECT_LT(prev / err, 4.2);
        }
        prev = err;
    }
}

TEST(Grid, CosineInTimeConvergesAtSecondOrder) {
    double prev = 0.0;
    for (int n : {21, 41, 81}) {
        const Grid2 g = Grid2::make(n, 3, 2.0 / (n - 1), 0.5, Boundary::Clamped);
        const double err = max_abs_diff(d_t(sample(g, [](double t, double) { return std::cos(t); })),
                                        sample(g, [](double t, double) { return -std::sin(t); }));
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 3.5);
            EXPECT_LT(prev / err, 4.5);
        }
        prev = err;
    }
}

TEST(Grid, MixedDerivativesCommute) {
    // Tensor-product stencils act on separate indices, so the discrete operators
    // commute up to rounding, not merely to second order.
    for (int n : {17, 33}) {
        const double h = 1.0 / (n - 1);
        const Grid2 g = Grid2::make(n, n, h, h, Boundary::Clamped);
        VecField f(g);
        for (int it = 0; it < n; ++it)
            for (int is = 0; is < n; ++is) {
                const double t = g.t(it), s = g.s(is);
                f(it, is) = Vec3(std::sin(2 * s + t), std::cos(s * t), std::exp(0.5 * s - t));
            }
        EXPECT_LT(interior_max_norm(d_t(d_s(f)) - d_s(d_t(f)), 0), 1e-10);
    }
}

TEST(Grid, PeriodicSummationByParts) {
    const int n = 40;
    const double L = 2.0;
    const Grid2 g = Grid2::make(3, n, 0.1, L / n, Boundary::Periodic);
    const ScalarField f = sample(g, [&](double t, double s) { return std::exp(std::sin(kTwoPi * s / L)) + t; });
    const ScalarField h = sample(g, [&](double, double s) { return std::cos(2 * kTwoPi * s / L) * s; });
    const ScalarField df = d_s(f), dh = d_s(h);
    for (int it = 0; it < g.n_t; ++it) {
        double lhs = 0.0, rhs = 0.0;
        for (int is = 0; is < n; ++is) {
            lhs += df(it, is) * h(it, is) * g.ds;
            rhs -= f(it, is) * dh(it, is) * g.ds;
        }
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(Grid, IntegrateExamples) {
    const Grid2 clamped = Grid2::make(3, 11, 1.0, 0.1, Boundary::Clamped);
    EXPECT_NEAR(integrate_s(ScalarField(clamped, 1.0), 0), 1.0, 1e-12);
    EXPECT_NEAR(integrate_s(sample(clamped, [](double, double s) { return s; }), 1), 0.5, 1e-12);

    const double L = 2.5;
    const Grid2 per = Grid2::make(3, 50, 1.0, L / 50, Boundary::Periodic);
    EXPECT_NEAR(integrate_s(ScalarField(per, 1.0), 0), L, 1e-12);
    EXPECT_NEAR(integrate_s(sample(per, [&](double, double s) { return std::sin(kTwoPi * s / L); }), 0), 0.0, 1e-12);

    const VecField v(clamped, Vec3(1, 2, 3));
    EXPECT_LT((integrate_s(v, 0) - Vec3(1, 2, 3)).norm(), 1e-12);
}

TEST(Grid, InteriorNormsSkipBoundaryBand) {
    const Grid2 g = Grid2::make(8, 8, 0.1, 0.1, Boundary::Clamped);
    VecField f(g);
    f(0, 4) = Vec3(100, 0, 0);
    f(4, 1) = Vec3(0, 50, 0);
    f(4, 4) = Vec3(0, 0, 2);
    EXPECT_DOUBLE_EQ(interior_max_norm(f), 2.0);
    EXPECT_DOUBLE_EQ(interior_max_norm(f, 0), 100.0);
    EXPECT_EQ(g.boundary_distance(0, 4), 0);
    EXPECT_EQ(g.boundary_distance(4, 1), 1);

    const Grid2 p = Grid2::make(8, 8, 0.1, 0.1, Boundary::Periodic);
    EXPECT_EQ(p.boundary_distance(3, 0), 3);  // only time ends count
}
