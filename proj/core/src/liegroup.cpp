#include "strpend/liegroup.hpp"

#include "strpend/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace strpend {

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

Vec3 vee(const Mat3& m, double tol) {
    const Mat3 sym = 0.5 * (m + m.transpose());
    const double asym = sym.cwiseAbs().maxCoeff();
    if (!(asym <= tol)) {
        std::ostringstream os;
        os << "vee: input is not skew-symmetric (symmetric part " << asym << ")";
        throw Error(os.str());
    }
    return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

double orthogonality_error(const Mat3& m) {
    return (Mat3::Identity() - m.transpose() * m).norm();
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
    if (!m.allFinite()) throw ModelError("rotation", "non-finite entries");
    const double err = orthogonality_error(m);
    if (!(err <= tol)) {
        std::ostringstream os;
        os << "not orthogonal (||I - R^T R||_F = " << err << ")";
        throw ModelError("rotation", os.str());
    }
    if (!(m.determinant() > 0.0)) throw ModelError("rotation", "determinant is not positive");
    return Rotation(m);
}

Rotation cayley(const Vec3& c) {
    const Mat3 C = hat(c);
    const double scale = 2.0 / (1.0 + c.squaredNorm());
    return Rotation(Mat3::Identity() + scale * (C + C * C));
}

Vec3 cayley_inverse(const Rotation& r) {
    const Mat3& m = r.matrix();
    const double denom = 1.0 + m.trace();
    if (!(denom > 1e-12)) {
        throw ChartBoundaryError("cayley_inverse: rotation angle is pi (Cayley chart boundary)");
    }
    const Vec3 w(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
    return w / denom;
}

}  // namespace strpend
