#include "strand/model.hpp"

#include <algorithm>
#include <cmath>

#include "strand/errors.hpp"

namespace strand {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require_symmetric(const Mat3& m, const char* name) {
    if (!m.allFinite()) throw InvalidArgument(std::string(name) + " has non-finite entries");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw InvalidArgument(std::string(name) + " is not symmetric");
    }
}

double min_eigenvalue(const Mat3& m) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Mat3& m) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

ModelParams ModelParams::make(const Mat3& I, const Mat3& K, const Mat3& C, const Mat3& D, double kappa,
                              double c0) {
    ModelParams p{I, K, C, D, kappa, c0};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    require_symmetric(inertia_body, "inertia I");
    require_symmetric(inertia_rotor, "inertia K");
    require_symmetric(pot_C, "potential C");
    require_symmetric(pot_D, "potential D");
    if (inertia_body.llt().info() != Eigen::Success || min_eigenvalue(inertia_body) <= 0.0) {
        throw InvalidArgument("inertia I is not positive definite");
    }
    if (inertia_rotor.llt().info() != Eigen::Success || min_eigenvalue(inertia_rotor) <= 0.0) {
        throw InvalidArgument("inertia K is not positive definite");
    }
    if (min_eigenvalue(pot_C) < -kSymmetryTolerance) throw InvalidArgument("potential C is not semidefinite");
    if (min_eigenvalue(pot_D) < -kSymmetryTolerance) throw InvalidArgument("potential D is not semidefinite");
    if (!(std::isfinite(pot_kappa) && pot_kappa >= 0.0)) throw InvalidArgument("potential kappa must be >= 0");
    if (!(std::isfinite(pot_c0) && pot_c0 > 0.0)) throw InvalidArgument("potential c0 must be > 0");
}

double ModelParams::stiffness() const {
    return std::max({max_eigenvalue(pot_C), max_eigenvalue(pot_D), pot_kappa * pot_c0});
}

double potential_E(const Vec3& Omega, const Vec3& a, double c, const ModelParams& p) {
    const double dc = c - p.pot_c0;
    return 0.5 * Omega.dot(p.pot_C * Omega) + 0.5 * a.dot(p.pot_D * a) + 0.25 * p.pot_kappa * dc * dc;
}

PotentialGradient dE(const Vec3& Omega, const Vec3& a, double c, const ModelParams& p) {
    return {p.pot_C * Omega, p.pot_D * a, 0.5 * p.pot_kappa * (c - p.pot_c0)};
}

namespace {

// Shared closed form for both reduced Lagrangians; a = theta_s, b = theta_t.
double reduced_lagrangian(const Vec3& rho, const Vec3& rho_t, const Vec3& a, const Vec3& b,
                          const Vec3& Omega, const Vec3& omega, const ModelParams& p) {
    const Vec3 m = rho_t + omega.cross(rho);
    const Vec3 spin = omega + b;
    return 0.5 * m.squaredNorm() + 0.5 * omega.dot(p.inertia_body * omega) +
           0.5 * spin.dot(p.inertia_rotor * spin) - potential_E(Omega, a, rho.squaredNorm(), p);
}

}  // namespace

double lagrangian_unreduced(const UnreducedPoint& pt, const ModelParams& p) {
    const Mat3& lam = pt.Lambda.matrix();
    const Vec3 omega = vee(lam.transpose() * pt.Lambda_t);
    const Vec3 Omega = vee(lam.transpose() * pt.Lambda_s);
    const Vec3 spin = omega + pt.theta_t;
    return 0.5 * pt.r_t.squaredNorm() + 0.5 * omega.dot(p.inertia_body * omega) +
           0.5 * spin.dot(p.inertia_rotor * spin) - potential_E(Omega, pt.theta_s, pt.r.squaredNorm(), p);
}

UnreducedPoint act_point(const UnreducedPoint& pt, const Rot3& Gamma) {
    UnreducedPoint out = pt;
    const Mat3& G = Gamma.matrix();
    out.r = G * pt.r;
    out.r_s = G * pt.r_s;
    out.r_t = G * pt.r_t;
    out.Lambda = Gamma * pt.Lambda;
    out.Lambda_s = G * pt.Lambda_s;
    out.Lambda_t = G * pt.Lambda_t;
    return out;
}

Stage1Point project_point(const UnreducedPoint& pt) {
    const Mat3 lam_T = pt.Lambda.matrix().transpose();
    Stage1Point out;
    out.omega = vee(lam_T * pt.Lambda_t);
    out.Omega = vee(lam_T * pt.Lambda_s);
    out.rho = lam_T * pt.r;
    out.rho_t = lam_T * pt.r_t - out.omega.cross(out.rho);
    out.theta_s = pt.theta_s;
    out.theta_t = pt.theta_t;
    return out;
}

double lagrangian_stage1(const Stage1Point& pt, const ModelParams& p) {
    return reduced_lagrangian(pt.rho, pt.rho_t, pt.theta_s, pt.theta_t, pt.Omega, pt.omega, p);
}

double lagrangian_stage2(const Vec3& rho, const Vec3& rho_t, const Vec3& a, const Vec3& b,
                         const Vec3& Omega, const Vec3& omega, const ModelParams& p) {
    return reduced_lagrangian(rho, rho_t, a, b, Omega, omega, p);
}

FiberDerivatives fiber_derivatives_stage1(const Stage1Point& pt, const ModelParams& p) {
    const Vec3 m = pt.rho_t + pt.omega.cross(pt.rho);
    const PotentialGradient g = dE(pt.Omega, pt.theta_s, pt.rho.squaredNorm(), p);
    const Vec3 rotor_momentum = p.inertia_rotor * (pt.omega + pt.theta_t);
    FiberDerivatives d;
    d.dl_drho = m.cross(pt.omega) - 2.0 * g.dc * pt.rho;
    d.dl_drho_t = m;
    d.dl_dtheta_s = -g.da;
    d.dl_dtheta_t = rotor_momentum;
    d.dl_dOmega = -g.dOmega;
    d.dl_domega = pt.rho.cross(m) + p.inertia_body * pt.omega + rotor_momentum;
    return d;
}

const char* slot_name(Slot slot) {
    switch (slot) {
        case Slot::Rho: return "rho";
        case Slot::RhoT: return "rho_t";
        case Slot::ThetaS: return "theta_s";
        case Slot::ThetaT: return "theta_t";
        case Slot::OmegaS: return "Omega";
        case Slot::OmegaT: return "omega";
    }
    return "?";
}

Vec3& slot_ref(Stage1Point& pt, Slot slot) {
    switch (slot) {
        case Slot::Rho: return pt.rho;
        case Slot::RhoT: return pt.rho_t;
        case Slot::ThetaS: return pt.theta_s;
        case Slot::ThetaT: return pt.theta_t;
        case Slot::OmegaS: return pt.Omega;
        case Slot::OmegaT: return pt.omega;
    }
    return pt.rho;
}

const Vec3& slot_value(const FiberDerivatives& d, Slot slot) {
    switch (slot) {
        case Slot::Rho: return d.dl_drho;
        case Slot::RhoT: return d.dl_drho_t;
        case Slot::ThetaS: return d.dl_dtheta_s;
        case Slot::ThetaT: return d.dl_dtheta_t;
        case Slot::OmegaS: return d.dl_dOmega;
        case Slot::OmegaT: return d.dl_domega;
    }
    return d.dl_drho;
}

Vec3 fd_fiber_derivative(const std::function<double(const Stage1Point&)>& l, const Stage1Point& pt,
                         Slot slot, double step) {
    if (!(step >= 1e-9 && step <= 1e-3)) throw InvalidArgument("finite-difference step outside [1e-9, 1e-3]");
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
        Stage1Point plus = pt;
        Stage1Point minus = pt;
        slot_ref(plus, slot)[k] += step;
        slot_ref(minus, slot)[k] -= step;
        out[k] = (l(plus) - l(minus)) / (2.0 * step);
    }
    return out;
}

Vec3 fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x, double step) {
    if (!(step >= 1e-9 && step <= 1e-3)) throw InvalidArgument("finite-difference step outside [1e-9, 1e-3]");
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
        Vec3 plus = x;
        Vec3 minus = x;
        plus[k] += step;
        minus[k] -= step;
        out[k] = (f(plus) - f(minus)) / (2.0 * step);
    }
    return out;
}

}  // namespace strand
