#pragma once

#include <Eigen/Dense>

namespace strand {

/// Element of R^3. Doubles as so(3) through the hat map.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/**
 * Element of SO(3) stored as an orthogonal 3x3 matrix with unit determinant.
 *
 * Construction through from_matrix() validates the group invariants
 * (||m^T m - Id||_F <= 1e-9 and |det m - 1| <= 1e-9). Products and inverses of
 * valid rotations are trusted without revalidation.
 */
class Rot3 {
public:
    Rot3() : m_(Mat3::Identity()) {}

    static Rot3 identity() { return Rot3(); }
    static Rot3 from_matrix(const Mat3& m);

    const Mat3& matrix() const { return m_; }
    Rot3 inverse() const { return Rot3(m_.transpose(), Unchecked{}); }

    Rot3 operator*(const Rot3& other) const { return Rot3(m_ * other.m_, Unchecked{}); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

    /// Frobenius orthogonality defect ||m^T m - Id||_F.
    double orthogonality_defect() const;

private:
    struct Unchecked {};
    Rot3(const Mat3& m, Unchecked) : m_(m) {}
    friend Rot3 exp_so3(const Vec3&);
    friend Rot3 reorthonormalize(const Mat3&);

    Mat3 m_;
};

inline constexpr double kRotationTolerance = 1e-9;
inline constexpr double kExpTaylorThreshold = 1e-4;
inline constexpr double kLogAngleMargin = 1e-6;
inline constexpr double kVeeTolerance = 1e-6;
inline constexpr double kMaxReorthoDistance = 0.1;

/// hat(v) * w == v x w.
Mat3 hat(const Vec3& v);

/// Inverse of hat(). Reads the antisymmetric part; throws NotAntisymmetric when
/// ||M + M^T||_F exceeds kVeeTolerance.
Vec3 vee(const Mat3& m);

/// Rodrigues exponential. Uses a 4th-order Taylor expansion of the coefficients
/// below kExpTaylorThreshold.
Rot3 exp_so3(const Vec3& v);

/// Principal logarithm, |result| < pi. Throws NearAngleApi when the rotation
/// angle exceeds pi - kLogAngleMargin.
Vec3 log_so3(const Rot3& r);

/// Rotation angle in [0, pi], computed with atan2 for accuracy near 0 and pi.
double rotation_angle(const Rot3& r);

/// Nearest rotation (orthogonal polar factor). Throws TooFarFromGroup when m is
/// farther than kMaxReorthoDistance (Frobenius) from SO(3).
Rot3 reorthonormalize(const Mat3& m);

/// Right Jacobian of exp: exp(v + d) ~ exp(v) exp(Jr(v) d).
Mat3 right_jacobian(const Vec3& v);

/// Inverse right Jacobian: log(exp(v) exp(e)) ~ v + Jr^{-1}(v) e.
Mat3 right_jacobian_inv(const Vec3& v);

/// Inverse left Jacobian: log(exp(e) exp(v)) ~ v + Jl^{-1}(v) e.
inline Mat3 left_jacobian_inv(const Vec3& v) { return right_jacobian_inv(-v); }

}  // namespace strand
