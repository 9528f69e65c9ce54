#include "strand/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "strand/residuals.hpp"

namespace strand {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Mat3 random_spd(std::mt19937_64& rng, double lo, double hi) {
    const Mat3 Q = random_rotation(rng).matrix();
    const Vec3 eig(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
    const Mat3 m = Q * eig.asDiagonal() * Q.transpose();
    return 0.5 * (m + m.transpose());
}

// sin^4 window on [0, 1]; vanishes to fourth order at both ends.
double window(double x) {
    const double w = std::sin(std::numbers::pi * x);
    return w * w * w * w;
}

}  // namespace

Vec3 SmoothVectorField::value(double t, double s) const {
    Vec3 out = offset_;
    for (const Mode& m : modes_) out += m.amplitude * std::sin(m.k_s * s + m.k_t * t + m.phase);
    return out;
}

Vec3 SmoothVectorField::d_s(double t, double s) const {
    Vec3 out = Vec3::Zero();
    for (const Mode& m : modes_) out += m.amplitude * (m.k_s * std::cos(m.k_s * s + m.k_t * t + m.phase));
    return out;
}

Vec3 SmoothVectorField::d_t(double t, double s) const {
    Vec3 out = Vec3::Zero();
    for (const Mode& m : modes_) out += m.amplitude * (m.k_t * std::cos(m.k_s * s + m.k_t * t + m.phase));
    return out;
}

VecField SmoothVectorField::sample(const Grid2& g) const {
    VecField f(g);
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) f(it, is) = value(g.t(it), g.s(is));
    }
    return f;
}

SmoothVectorField SmoothVectorField::random(std::mt19937_64& rng, const Grid2& g, int n_modes, double amplitude,
                                            int max_wave) {
    std::uniform_int_distribution<int> wave(g.periodic() ? 1 : 0, max_wave);
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(n_modes));
    for (int k = 0; k < n_modes; ++k) {
        Mode m;
        m.amplitude = random_vec(rng, amplitude);
        // Clamped directions may use non-integer wave numbers; periodic s may not.
        const double ks = g.periodic() ? wave(rng) : uniform(rng, 0.3, max_wave);
        m.k_s = kTwoPi * ks / g.length();
        m.k_t = kTwoPi * uniform(rng, 0.3, max_wave) / g.duration();
        m.phase = uniform(rng, 0.0, kTwoPi);
        modes.push_back(m);
    }
    return SmoothVectorField(random_vec(rng, amplitude), std::move(modes));
}

UnreducedSection AnalyticLift::sample(const Grid2& g) const {
    UnreducedSection u{VecField(g), RotField(g), VecField(g)};
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            const double t = g.t(it);
            const double s = g.s(is);
            u.r(it, is) = r.value(t, s);
            u.Lambda(it, is) = exp_so3(phi.value(t, s));
            u.theta(it, is) = theta.value(t, s);
        }
    }
    return u;
}

Stage1Section AnalyticLift::exact_stage1(const Grid2& g) const {
    Stage1Section s1{VecField(g), VecField(g), VecField(g), VecField(g)};
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            const double t = g.t(it);
            const double s = g.s(is);
            const Vec3 ph = phi.value(t, s);
            const Mat3 Jr = right_jacobian(ph);
            s1.rho(it, is) = exp_so3(ph).matrix().transpose() * r.value(t, s);
            s1.theta(it, is) = theta.value(t, s);
            s1.Omega(it, is) = Jr * phi.d_s(t, s);
            s1.omega(it, is) = Jr * phi.d_t(t, s);
        }
    }
    return s1;
}

AnalyticLift AnalyticLift::random(std::mt19937_64& rng, const Grid2& g, double rotation_amplitude) {
    AnalyticLift lift;
    lift.r = SmoothVectorField::random(rng, g, 3, 0.5);
    lift.phi = SmoothVectorField::random(rng, g, 3, rotation_amplitude / 3.0);
    lift.theta = SmoothVectorField::random(rng, g, 3, 0.5);
    return lift;
}

Stage1Section twist_pulse_section(const Grid2& g, const ModelParams& p) {
    const double L = g.length();
    const double T = g.duration();
    const double width = L / 10.0;
    const double root_c0 = std::sqrt(p.pot_c0);
    Stage1Section s1{VecField(g), VecField(g), VecField(g), VecField(g)};
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            const double t = g.t(it) / T;
            const double s = g.s(is) / L;
            const double z = (g.s(is) - 0.5 * L) / width;
            const double pulse = std::exp(-0.5 * z * z);
            const double wave_t = std::sin(kTwoPi * t);
            const double wave_s = std::sin(kTwoPi * s);
            s1.Omega(it, is) = Vec3(0.1 * wave_s * std::cos(kTwoPi * t), 0.05 * std::cos(kTwoPi * s + 0.3),
                                    pulse * (1.0 + 0.3 * wave_t));
            s1.omega(it, is) = Vec3(0.2 * pulse * wave_t, 0.1 * std::sin(kTwoPi * (s + t)), 0.3 * pulse * std::cos(kTwoPi * t));
            s1.rho(it, is) =
                root_c0 * Vec3(1.0 + 0.05 * wave_s * wave_t, 0.1 * pulse * std::sin(kTwoPi * t + 1.0), 0.05 * wave_s);
            s1.theta(it, is) = Vec3(0.3 * pulse * wave_t, 0.2 * std::sin(kTwoPi * (s - t)), 0.1 * std::cos(kTwoPi * s) * t);
        }
    }
    return s1;
}

VariationSpec smooth_variation(const Grid2& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const SmoothVectorField fr = SmoothVectorField::random(rng, g, 2, 1.0);
    const SmoothVectorField fe = SmoothVectorField::random(rng, g, 2, 1.0);
    const SmoothVectorField fth = SmoothVectorField::random(rng, g, 2, 1.0);
    VariationSpec var{VecField(g), VecField(g), VecField(g)};
    for (int it = 0; it < g.n_t; ++it) {
        for (int is = 0; is < g.n_s; ++is) {
            const double t = g.t(it);
            const double s = g.s(is);
            // Nodes next to a boundary are excluded exactly; the window already
            // makes them O(h^4) so the cut is invisible at second order.
            const bool near_edge = g.boundary_distance(it, is) < kInteriorBand;
            double w = window(t / g.duration());
            if (!g.periodic()) w *= window(s / g.length());
            if (near_edge) w = 0.0;
            var.delta_rho(it, is) = w * fr.value(t, s);
            var.eta(it, is) = w * fe.value(t, s);
            var.delta_theta(it, is) = w * fth.value(t, s);
        }
    }
    return var;
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
    return Vec3(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

Rot3 random_rotation(std::mt19937_64& rng) {
    // Uniform on SO(3) via a unit quaternion drawn from a 4-d Gaussian.
    std::normal_distribution<double> n01;
    Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
    q.normalize();
    return Rot3::from_matrix(q.toRotationMatrix());
}

Stage1Point random_stage1_point(std::mt19937_64& rng) {
    Stage1Point pt;
    pt.rho = random_vec(rng);
    pt.rho_t = random_vec(rng);
    pt.theta_s = random_vec(rng);
    pt.theta_t = random_vec(rng);
    pt.Omega = random_vec(rng);
    pt.omega = random_vec(rng);
    return pt;
}

UnreducedPoint random_unreduced_point(std::mt19937_64& rng) {
    UnreducedPoint pt;
    pt.r = random_vec(rng);
    pt.r_s = random_vec(rng);
    pt.r_t = random_vec(rng);
    pt.Lambda = random_rotation(rng);
    pt.Lambda_s = pt.Lambda.matrix() * hat(random_vec(rng));
    pt.Lambda_t = pt.Lambda.matrix() * hat(random_vec(rng));
    pt.theta_s = random_vec(rng);
    pt.theta_t = random_vec(rng);
    return pt;
}

ModelParams random_params(std::mt19937_64& rng) {
    ModelParams p;
    p.inertia_body = random_spd(rng, 0.5, 2.0);
    p.inertia_rotor = random_spd(rng, 0.2, 1.0);
    p.pot_C = random_spd(rng, 0.0, 2.0);
    p.pot_D = random_spd(rng, 0.0, 1.0);
    p.pot_kappa = uniform(rng, 0.0, 2.0);
    p.pot_c0 = uniform(rng, 0.5, 1.5);
    return p;
}

ModelParams default_params() {
    ModelParams p;
    p.inertia_body = Vec3(1.0, 1.5, 2.0).asDiagonal();
    p.inertia_rotor = Vec3(0.3, 0.2, 0.4).asDiagonal();
    p.pot_C = Vec3(1.0, 1.0, 0.5).asDiagonal();
    p.pot_D = Vec3(0.2, 0.2, 0.2).asDiagonal();
    p.pot_kappa = 1.0;
    p.pot_c0 = 1.0;
    return p;
}

ModelParams anisotropic_params() {
    const Mat3 Q1 = exp_so3(Vec3(0.4, -0.7, 0.3)).matrix();
    const Mat3 Q2 = exp_so3(Vec3(-0.5, 0.2, 0.9)).matrix();
    ModelParams p;
    p.inertia_body = Q1 * Vec3(1.0, 1.5, 2.0).asDiagonal() * Q1.transpose();
    p.inertia_rotor = Q2 * Vec3(0.3, 0.2, 0.4).asDiagonal() * Q2.transpose();
    p.pot_C = Q2 * Vec3(1.0, 0.8, 0.5).asDiagonal() * Q2.transpose();
    p.pot_D = Q1 * Vec3(0.2, 0.3, 0.1).asDiagonal() * Q1.transpose();
    p.pot_kappa = 1.0;
    p.pot_c0 = 1.0;
    return p;
}

}  // namespace strand
