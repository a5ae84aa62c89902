#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace strpend {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Skew-symmetric matrix with hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. Throws strpend::Error if the symmetric part of `m`
/// exceeds `tol` in any entry (a non-skew input means an upstream formula error).
Vec3 vee(const Mat3& m, double tol = 1e-10);

/// Frobenius norm of I - m^T m.
double orthogonality_error(const Mat3& m);

/// Element of SO(3). The only ways to obtain one are identity(), cayley(),
/// a validated matrix, or the product of two rotations.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    static Rotation identity() { return Rotation(); }

    /// Validates ||I - m^T m||_F <= tol and det(m) > 0, else throws ModelError.
    static Rotation from_matrix(const Mat3& m, double tol = 1e-12);

    const Mat3& matrix() const noexcept { return m_; }

    Rotation transpose() const { return Rotation(m_.transpose()); }

    Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

    friend bool operator==(const Rotation& a, const Rotation& b) { return a.m_ == b.m_; }

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    friend Rotation cayley(const Vec3& c);

    Mat3 m_;
};

/// Cayley transform (I + hat(c)) (I - hat(c))^{-1}, evaluated in the closed form
/// I + 2 / (1 + |c|^2) (hat(c) + hat(c)^2). Rotation angle is 2 atan(|c|) about c.
Rotation cayley(const Vec3& c);

/// Inverse Cayley map, vee(R - R^T) / (1 + tr R).
/// Throws ChartBoundaryError for rotations by (numerically) pi.
Vec3 cayley_inverse(const Rotation& r);

}  // namespace strpend
