#include <gtest/gtest.h>

#include <random>

#include "strand/errors.hpp"
#include "strand/model.hpp"
#include "strand/synthetic.hpp"

using namespace strand;

namespace {

ModelParams no_potential() {
    return ModelParams::make(Mat3::Identity(), Mat3::Identity(), Mat3::Zero(), Mat3::Zero(), 0.0, 1.0);
}

constexpr Slot kSlots[] = {Slot::Rho, Slot::RhoT, Slot::ThetaS, Slot::ThetaT, Slot::OmegaS, Slot::OmegaT};

}  // namespace

TEST(Model, ParamsValidation) {
    const Mat3 I = Mat3::Identity();
    EXPECT_NO_THROW(ModelParams::make(I, I, I, I, 1.0, 1.0));
    EXPECT_THROW(ModelParams::make(-I, I, I, I, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(ModelParams::make(I, Mat3::Zero(), I, I, 1.0, 1.0), InvalidArgument);
    Mat3 asym = I;
    asym(0, 1) = 0.5;
    EXPECT_THROW(ModelParams::make(I, I, asym, I, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(ModelParams::make(I, I, I, -I, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(ModelParams::make(I, I, I, I, -1.0, 1.0), InvalidArgument);
    EXPECT_THROW(ModelParams::make(I, I, I, I, 1.0, 0.0), InvalidArgument);
}

TEST(Model, PotentialExamples) {
    const ModelParams p0 = default_params();
    EXPECT_EQ(potential_E(Vec3::Zero(), Vec3::Zero(), p0.pot_c0, p0), 0.0);

    const Mat3 I = Mat3::Identity();
    const ModelParams quad = ModelParams::make(I, I, I, I, 0.0, 1.0);
    EXPECT_NEAR(potential_E(Vec3(1, 0, 0), Vec3(0, 2, 0), 1.0, quad), 2.5, 1e-15);

    const ModelParams ring = ModelParams::make(I, I, Mat3::Zero(), Mat3::Zero(), 4.0, 1.0);
    EXPECT_NEAR(potential_E(Vec3::Zero(), Vec3::Zero(), 2.0, ring), 1.0, 1e-15);
}

TEST(Model, PotentialGradientExamples) {
    const ModelParams p0 = default_params();
    const PotentialGradient z = dE(Vec3::Zero(), Vec3::Zero(), p0.pot_c0, p0);
    EXPECT_EQ(z.dOmega, Vec3::Zero());
    EXPECT_EQ(z.da, Vec3::Zero());
    EXPECT_EQ(z.dc, 0.0);

    ModelParams p = no_potential();
    p.pot_C = Vec3(1, 2, 3).asDiagonal();
    EXPECT_EQ(dE(Vec3(1, 1, 1), Vec3::Zero(), 1.0, p).dOmega, Vec3(1, 2, 3));
}

TEST(Model, PotentialGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = random_params(rng);
        const Vec3 Om = random_vec(rng), a = random_vec(rng);
        const double c = 0.5 + random_vec(rng).squaredNorm();
        const PotentialGradient g = dE(Om, a, c, p);
        const Vec3 fd_Om = fd_gradient([&](const Vec3& x) { return potential_E(x, a, c, p); }, Om, 1e-6);
        const Vec3 fd_a = fd_gradient([&](const Vec3& x) { return potential_E(Om, x, c, p); }, a, 1e-6);
        const double fd_c = (potential_E(Om, a, c + 1e-6, p) - potential_E(Om, a, c - 1e-6, p)) / 2e-6;
        EXPECT_LE((fd_Om - g.dOmega).norm() / std::max(1.0, g.dOmega.norm()), 1e-7);
        EXPECT_LE((fd_a - g.da).norm() / std::max(1.0, g.da.norm()), 1e-7);
        EXPECT_LE(std::abs(fd_c - g.dc) / std::max(1.0, std::abs(g.dc)), 1e-7);
    }
}

TEST(Model, UnreducedLagrangianExamples) {
    const ModelParams p = default_params();
    UnreducedPoint pt;
    pt.r = Vec3(1, 0, 0);  // <r,r> = c0
    EXPECT_EQ(lagrangian_unreduced(pt, p), 0.0);

    const ModelParams free = no_potential();
    UnreducedPoint moving;
    moving.r_t = Vec3(1, 0, 0);
    EXPECT_NEAR(lagrangian_unreduced(moving, free), 0.5, 1e-15);

    UnreducedPoint bad;
    bad.Lambda_s = Mat3::Identity();
    EXPECT_THROW(lagrangian_unreduced(bad, p), NotAntisymmetric);
}

TEST(Model, UnreducedLagrangianIsInvariant) {
    std::mt19937_64 rng(22);
    const ModelParams p = random_params(rng);
    for (int i = 0; i < 200; ++i) {
        const UnreducedPoint pt = random_unreduced_point(rng);
        const double L = lagrangian_unreduced(pt, p);
        const double Lg = lagrangian_unreduced(act_point(pt, random_rotation(rng)), p);
        EXPECT_LE(std::abs(Lg - L), 1e-12 * (1.0 + std::abs(L)));
    }
}

TEST(Model, Stage1Examples) {
    const ModelParams p0 = default_params();
    Stage1Point rest;
    rest.rho = Vec3(0, 1, 0);
    EXPECT_EQ(lagrangian_stage1(rest, p0), 0.0);

    Stage1Point pt;
    pt.rho = Vec3(1, 0, 0);
    pt.omega = Vec3(0, 0, 1);
    const ModelParams free = no_potential();
    EXPECT_NEAR(lagrangian_stage1(pt, free), 1.5, 1e-15);
    EXPECT_LT((fiber_derivatives_stage1(pt, free).dl_domega - Vec3(0, 0, 3)).norm(), 1e-15);
}

TEST(Model, Stage1MatchesLiftedUnreduced) {
    std::mt19937_64 rng(23);
    const ModelParams p = random_params(rng);
    for (int i = 0; i < 200; ++i) {
        const Stage1Point s = random_stage1_point(rng);
        const Rot3 Lambda = random_rotation(rng);
        UnreducedPoint u;
        u.Lambda = Lambda;
        u.r = Lambda * s.rho;
        u.r_t = Lambda * (s.rho_t + s.omega.cross(s.rho));
        u.r_s = Lambda * random_vec(rng);  // no stage-1 dependence
        u.Lambda_s = Lambda.matrix() * hat(s.Omega);
        u.Lambda_t = Lambda.matrix() * hat(s.omega);
        u.theta_s = s.theta_s;
        u.theta_t = s.theta_t;
        const double L = lagrangian_unreduced(u, p);
        EXPECT_LE(std::abs(lagrangian_stage1(s, p) - L), 1e-12 * (1.0 + std::abs(L)));

        const Stage1Point back = project_point(u);
        EXPECT_LT((back.rho - s.rho).norm(), 1e-12);
        EXPECT_LT((back.rho_t - s.rho_t).norm(), 1e-12);
        EXPECT_LT((back.Omega - s.Omega).norm(), 1e-12);
        EXPECT_LT((back.omega - s.omega).norm(), 1e-12);
    }
}

TEST(Model, Stage2SharesTheStage1Formula) {
    std::mt19937_64 rng(24);
    const ModelParams p = random_params(rng);
    for (int i = 0; i < 100; ++i) {
        const Stage1Point s = random_stage1_point(rng);
        EXPECT_EQ(lagrangian_stage2(s.rho, s.rho_t, s.theta_s, s.theta_t, s.Omega, s.omega, p),
                  lagrangian_stage1(s, p));
    }
    ModelParams free = no_potential();
    EXPECT_EQ(lagrangian_stage2(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                Vec3::Zero(), free),
              0.0);
}

TEST(Model, FiberDerivativesAtRestVanish) {
    const ModelParams p = default_params();
    Stage1Point pt;
    pt.rho = Vec3(0, 0, 1);
    const FiberDerivatives d = fiber_derivatives_stage1(pt, p);
    for (Slot s : kSlots) EXPECT_EQ(slot_value(d, s), Vec3::Zero()) << slot_name(s);
}

TEST(Model, FiberDerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(25);
    const ModelParams p = random_params(rng);
    const auto l = [&](const Stage1Point& x) { return lagrangian_stage1(x, p); };
    for (int i = 0; i < 100; ++i) {
        const Stage1Point pt = random_stage1_point(rng);
        const FiberDerivatives d = fiber_derivatives_stage1(pt, p);
        for (Slot s : kSlots) {
            const Vec3 exact = slot_value(d, s);
            const Vec3 fd = fd_fiber_derivative(l, pt, s, 1e-6);
            EXPECT_LE((fd - exact).norm() / std::max(1.0, exact.norm()), 1e-7) << slot_name(s);
        }
    }
}

TEST(Model, FiniteDifferenceHelpers) {
    Mat3 M;
    M << 2, 0.5, 0, 0.5, 3, -1, 0, -1, 4;
    const Vec3 v(0.3, -0.2, 1.7);
    const Vec3 g = fd_gradient([&](const Vec3& x) { return 0.5 * x.dot(M * x); }, v, 1e-4);
    EXPECT_LT((g - M * v).norm(), 1e-10);

    const ModelParams p = default_params();
    Stage1Point zero;
    const auto l = [&](const Stage1Point& x) { return lagrangian_stage1(x, p); };
    EXPECT_LT(fd_fiber_derivative(l, zero, Slot::OmegaT, 1e-6).norm(), 1e-10);
    EXPECT_THROW(fd_fiber_derivative(l, zero, Slot::Rho, 1e-2), InvalidArgument);
}

TEST(Model, KineticPartIsNonNegative) {
    std::mt19937_64 rng(26);
    ModelParams p = random_params(rng);
    p.pot_C.setZero();
    p.pot_D.setZero();
    p.pot_kappa = 0.0;
    for (int i = 0; i < 500; ++i) EXPECT_GE(lagrangian_stage1(random_stage1_point(rng), p), 0.0);
}
