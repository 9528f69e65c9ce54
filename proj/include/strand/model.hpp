#pragma once

#include <functional>

#include "strand/so3.hpp"

namespace strand {

/**
 * Material parameters of the strand.
 *
 * I and K are the body and rotor inertia tensors (symmetric positive definite).
 * C, D, kappa and c0 define the potential
 *   E(Omega, a, c) = 1/2 <Omega, C Omega> + 1/2 <a, D a> + kappa/4 (c - c0)^2,
 * with c = <rho, rho>. C and D may be semidefinite so that E can be switched off.
 */
struct ModelParams {
    Mat3 inertia_body = Mat3::Identity();
    Mat3 inertia_rotor = Mat3::Identity();
    Mat3 pot_C = Mat3::Zero();
    Mat3 pot_D = Mat3::Zero();
    double pot_kappa = 0.0;
    double pot_c0 = 1.0;

    /// Validated constructor; throws InvalidArgument naming the offending parameter.
    static ModelParams make(const Mat3& I, const Mat3& K, const Mat3& C, const Mat3& D, double kappa,
                            double c0);

    /// Checks the invariants of an aggregate-initialised instance.
    void validate() const;

    /// Largest eigenvalue among C, D and kappa * c0; drives the time-step guard.
    double stiffness() const;
};

struct PotentialGradient {
    Vec3 dOmega = Vec3::Zero();
    Vec3 da = Vec3::Zero();
    double dc = 0.0;
};

double potential_E(const Vec3& Omega, const Vec3& a, double c, const ModelParams& p);
PotentialGradient dE(const Vec3& Omega, const Vec3& a, double c, const ModelParams& p);

/// Arguments of the SO(3)-reduced Lagrangian (theta_s doubles as the stage-2 a).
struct Stage1Point {
    Vec3 rho = Vec3::Zero();
    Vec3 rho_t = Vec3::Zero();
    Vec3 theta_s = Vec3::Zero();
    Vec3 theta_t = Vec3::Zero();
    Vec3 Omega = Vec3::Zero();
    Vec3 omega = Vec3::Zero();
};

/// Point of the first jet of P = R^2 x R^3 x SO(3) x T^3. Lambda_s and Lambda_t
/// are tangent vectors at Lambda (Lambda^T Lambda_s antisymmetric).
struct UnreducedPoint {
    Vec3 r = Vec3::Zero();
    Vec3 r_s = Vec3::Zero();
    Vec3 r_t = Vec3::Zero();
    Rot3 Lambda;
    Mat3 Lambda_s = Mat3::Zero();
    Mat3 Lambda_t = Mat3::Zero();
    Vec3 theta_s = Vec3::Zero();
    Vec3 theta_t = Vec3::Zero();
};

double lagrangian_unreduced(const UnreducedPoint& pt, const ModelParams& p);

/// Left action of Gamma on a jet point (rotor shifts do not change a jet of derivatives).
UnreducedPoint act_point(const UnreducedPoint& pt, const Rot3& Gamma);

/// SO(3)-quotient of a jet point: rho = Lambda^T r, Omega and omega from the
/// left-trivialised frame rates, rho_t = Lambda^T r_t - omega x rho.
Stage1Point project_point(const UnreducedPoint& pt);
double lagrangian_stage1(const Stage1Point& pt, const ModelParams& p);
double lagrangian_stage2(const Vec3& rho, const Vec3& rho_t, const Vec3& a, const Vec3& b,
                         const Vec3& Omega, const Vec3& omega, const ModelParams& p);

/// Partial derivatives of the stage-1 Lagrangian. With the Maurer-Cartan
/// connection the horizontal derivative in rho is the plain partial derivative.
struct FiberDerivatives {
    Vec3 dl_drho;
    Vec3 dl_drho_t;
    Vec3 dl_dtheta_s;
    Vec3 dl_dtheta_t;
    Vec3 dl_dOmega;
    Vec3 dl_domega;
};

FiberDerivatives fiber_derivatives_stage1(const Stage1Point& pt, const ModelParams& p);

/// OmegaS is the s-rate Omega = Lambda^T Lambda_s, OmegaT the t-rate omega.
enum class Slot { Rho, RhoT, ThetaS, ThetaT, OmegaS, OmegaT };

const char* slot_name(Slot slot);
Vec3& slot_ref(Stage1Point& pt, Slot slot);
const Vec3& slot_value(const FiberDerivatives& d, Slot slot);

/// Central finite difference of l with respect to one slot. step must lie in
/// [1e-9, 1e-3].
Vec3 fd_fiber_derivative(const std::function<double(const Stage1Point&)>& l, const Stage1Point& pt,
                         Slot slot, double step);

/// Central finite-difference gradient of a function of one vector.
Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x, double step);

}  // namespace strand
