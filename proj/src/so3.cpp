#include "geoavoid/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "geoavoid/errors.hpp"

namespace geoavoid {

Rotation Rotation::from_matrix(const Mat3& m, double tol)
{
    if (!m.allFinite()) {
        throw GeoError(ErrorKind::InvalidRotation, "rotation matrix has non-finite entries");
    }
    const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
    const double det = m.determinant();
    if (ortho > tol || std::abs(det - 1.0) > tol) {
        throw GeoError(ErrorKind::InvalidRotation,
                       "matrix is not in SO(3): orthonormality error " + std::to_string(ortho)
                           + ", determinant " + std::to_string(det));
    }
    return Rotation(m);
}

Rotation Rotation::orthonormalize(const Mat3& m)
{
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3& v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) {
        u.col(2) = -u.col(2);
    }
    return Rotation(u * v.transpose());
}

double Rotation::orthonormality_error() const
{
    return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

Mat3 hat(const Vec3& a)
{
    Mat3 m;
    m << 0.0, -a.z(), a.y(),
        a.z(), 0.0, -a.x(),
        -a.y(), a.x(), 0.0;
    return m;
}

Vec3 vee(const Mat3& a, double skew_tol)
{
    if ((a + a.transpose()).norm() > skew_tol) {
        throw GeoError(ErrorKind::NotSkew, "vee: matrix is not skew-symmetric");
    }
    const Mat3 s = 0.5 * (a - a.transpose());
    return {s(2, 1), s(0, 2), s(1, 0)};
}

Rotation exp_so3(const Vec3& a)
{
    const double theta2 = a.squaredNorm();
    const double theta = std::sqrt(theta2);
    double sinc;  // sin(t)/t
    double cosc;  // (1 - cos t)/t^2
    if (theta < kSmallAngle) {
        sinc = 1.0 - theta2 / 6.0;
        cosc = 0.5 - theta2 / 24.0;
    } else {
        sinc = std::sin(theta) / theta;
        cosc = (1.0 - std::cos(theta)) / theta2;
    }
    const Mat3 k = hat(a);
    return Rotation(Mat3::Identity() + sinc * k + cosc * k * k);
}

double rotation_angle(const Rotation& r)
{
    const double c = 0.5 * (r.matrix().trace() - 1.0);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

Vec3 log_so3(const Rotation& r, double cut_guard)
{
    const double phi = rotation_angle(r);
    if (phi >= std::numbers::pi - cut_guard) {
        throw GeoError(ErrorKind::NearCutLocus,
                       "log_so3: rotation angle " + std::to_string(phi) + " is at the cut locus");
    }
    const Mat3& m = r.matrix();
    const Vec3 w{m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
    if (phi < kSmallAngle) {
        // phi / (2 sin phi) = 1/2 + phi^2/12 + O(phi^4)
        return (0.5 + phi * phi / 12.0) * w;
    }
    return (phi / (2.0 * std::sin(phi))) * w;
}

AxisAngle to_axis_angle(const Rotation& r, double cut_guard)
{
    const Vec3 w = log_so3(r, cut_guard);
    AxisAngle out;
    out.angle = w.norm();
    if (out.angle > 0.0) {
        out.axis = w / out.angle;
    }
    return out;
}

Vec3 riemannian_log(const Rotation& y, const Rotation& x, double cut_guard)
{
    return log_so3(y.transpose() * x, cut_guard);
}

double distance_so3(const Rotation& y, const Rotation& x, double cut_guard)
{
    return riemannian_log(y, x, cut_guard).norm();
}

Vec3 dexp_inv(const Vec3& omega, const Vec3& w)
{
    const double theta2 = omega.squaredNorm();
    const double theta = std::sqrt(theta2);
    // coefficient (1 - (t/2) cot(t/2)) / t^2
    double c;
    if (theta < 1e-4) {
        c = 1.0 / 12.0 + theta2 / 720.0;
    } else {
        const double half = 0.5 * theta;
        c = (1.0 - half * std::cos(half) / std::sin(half)) / theta2;
    }
    const Vec3 ow = omega.cross(w);
    return w + 0.5 * ow + c * omega.cross(ow);
}

}  // namespace geoavoid
