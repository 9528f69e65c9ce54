#include "strand/so3.hpp"

#include <cmath>
#include <numbers>

#include "strand/errors.hpp"

namespace strand {

Rot3 Rot3::from_matrix(const Mat3& m) {
    if (!m.allFinite()) throw NotARotation("rotation matrix has non-finite entries");
    const double defect = (m.transpose() * m - Mat3::Identity()).norm();
    const double det = m.determinant();
    if (defect > kRotationTolerance || std::abs(det - 1.0) > kRotationTolerance) {
        throw NotARotation("matrix is not in SO(3): orthogonality defect " + std::to_string(defect) +
                           ", det " + std::to_string(det));
    }
    return Rot3(m, Unchecked{});
}

double Rot3::orthogonality_defect() const {
    return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

Vec3 vee(const Mat3& m) {
    const double defect = (m + m.transpose()).norm();
    if (!(defect <= kVeeTolerance)) throw NotAntisymmetric(defect);
    return Vec3(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1)));
}

Rot3 exp_so3(const Vec3& v) {
    const double theta2 = v.squaredNorm();
    const double theta = std::sqrt(theta2);
    double a;  // sin(theta)/theta
    double b;  // (1 - cos(theta))/theta^2
    if (theta < kExpTaylorThreshold) {
        a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
        b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / theta2;
    }
    const Mat3 k = hat(v);
    return Rot3(Mat3::Identity() + a * k + b * k * k, Rot3::Unchecked{});
}

double rotation_angle(const Rot3& r) {
    const Mat3& m = r.matrix();
    const Vec3 s(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1)));
    const double c = 0.5 * (m.trace() - 1.0);
    return std::atan2(s.norm(), c);
}

Vec3 log_so3(const Rot3& r) {
    const Mat3& m = r.matrix();
    const Vec3 s(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1)));
    const double sin_theta = s.norm();
    const double cos_theta = 0.5 * (m.trace() - 1.0);
    const double theta = std::atan2(sin_theta, cos_theta);

    if (theta > std::numbers::pi - kLogAngleMargin) {
        throw NearAngleApi("rotation angle " + std::to_string(theta) + " too close to pi for log");
    }
    if (theta < kExpTaylorThreshold) {
        // theta / sin(theta) = 1 + theta^2/6 + 7 theta^4/360
        const double t2 = theta * theta;
        return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * s;
    }
    if (cos_theta > -0.5) return (theta / sin_theta) * s;

    // Large angles: the antisymmetric part is small relative to its error, so take the
    // axis from the symmetric part (1 - cos) a a^T and only its sign from s.
    const Mat3 b = 0.5 * (m + m.transpose()) - cos_theta * Mat3::Identity();
    Eigen::Index k = 0;
    b.diagonal().maxCoeff(&k);
    Vec3 axis = b.col(k) / std::sqrt(b(k, k) * (1.0 - cos_theta));
    axis.normalize();
    if (axis.dot(s) < 0.0) axis = -axis;
    return theta * axis;
}

Rot3 reorthonormalize(const Mat3& m) {
    if (!m.allFinite() || m.determinant() <= 0.0) {
        throw TooFarFromGroup("matrix has non-positive determinant");
    }
    // Newton iteration for the orthogonal polar factor; quadratic convergence from
    // the neighbourhood admitted below.
    Mat3 x = m;
    for (int iter = 0; iter < 50; ++iter) {
        const Mat3 next = 0.5 * (x + x.inverse().transpose());
        const double step = (next - x).norm();
        x = next;
        if (step < 1e-15) break;
    }
    const double distance = (x - m).norm();
    if (distance > kMaxReorthoDistance) {
        throw TooFarFromGroup("matrix is " + std::to_string(distance) + " from SO(3)");
    }
    return Rot3(x, Rot3::Unchecked{});
}

Mat3 right_jacobian(const Vec3& v) {
    const double t2 = v.squaredNorm();
    const double t = std::sqrt(t2);
    double b;  // (1 - cos t)/t^2
    double c;  // (t - sin t)/t^3
    if (t < 1e-3) {
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    } else {
        b = (1.0 - std::cos(t)) / t2;
        c = (t - std::sin(t)) / (t2 * t);
    }
    const Mat3 k = hat(v);
    return Mat3::Identity() - b * k + c * k * k;
}

Mat3 right_jacobian_inv(const Vec3& v) {
    const double t2 = v.squaredNorm();
    const double t = std::sqrt(t2);
    double d;  // 1/t^2 - (1 + cos t)/(2 t sin t)
    if (t < 1e-3) {
        d = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
    } else {
        d = 1.0 / t2 - (1.0 + std::cos(t)) / (2.0 * t * std::sin(t));
    }
    const Mat3 k = hat(v);
    return Mat3::Identity() + 0.5 * k + d * k * k;
}

}  // namespace strand
