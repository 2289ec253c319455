#ifndef GEOAVOID_SO3_HPP
#define GEOAVOID_SO3_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace geoavoid {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Default half-width of the excluded band below angle pi, where the
// logarithm's closed form breaks down.
inline constexpr double kDefaultCutLocusGuard = 1e-6;

// Angle below which exp/log switch to their Taylor forms.
inline constexpr double kSmallAngle = 1e-6;

inline constexpr double kRotationTolerance = 1e-9;

// An element of SO(3). Construction through from_matrix() checks
// orthonormality and orientation; products of valid rotations are trusted.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    static Rotation identity() { return Rotation(); }

    // Throws InvalidRotation when ||M^T M - I||_F or |det M - 1| exceeds tol.
    static Rotation from_matrix(const Mat3& m, double tol = kRotationTolerance);

    // Nearest rotation in the Frobenius sense (polar factor via SVD).
    static Rotation orthonormalize(const Mat3& m);

    const Mat3& matrix() const noexcept { return m_; }
    Rotation transpose() const { return Rotation(m_.transpose()); }
    double orthonormality_error() const;

    Rotation operator*(const Rotation& rhs) const { return Rotation(m_ * rhs.m_); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    friend Rotation exp_so3(const Vec3& a);

    Mat3 m_;
};

struct AxisAngle {
    double angle = 0.0;  // in [0, pi]
    Vec3 axis = Vec3::UnitX();  // unit; meaningless when angle == 0
};

Mat3 hat(const Vec3& a);

// Extracts the vector of the skew part 0.5 (A - A^T). Throws NotSkew when
// ||A + A^T||_F > skew_tol.
Vec3 vee(const Mat3& a, double skew_tol = 1e-8);

Rotation exp_so3(const Vec3& a);

// Rotation angle arccos(0.5 (tr R - 1)) with the argument clamped to [-1, 1].
double rotation_angle(const Rotation& r);

AxisAngle to_axis_angle(const Rotation& r, double cut_guard = kDefaultCutLocusGuard);

// Principal logarithm. Throws NearCutLocus when the angle is >= pi - cut_guard.
Vec3 log_so3(const Rotation& r, double cut_guard = kDefaultCutLocusGuard);

/// Body-frame representative of the Riemannian logarithm exp_y^{-1}(x),
/// i.e. log(y^T x). The geodesic t -> y exp(t u) runs from y to x.
Vec3 riemannian_log(const Rotation& y, const Rotation& x,
                    double cut_guard = kDefaultCutLocusGuard);

double distance_so3(const Rotation& y, const Rotation& x,
                    double cut_guard = kDefaultCutLocusGuard);

// Solves exp(-omega) d/dt exp(omega) = w for d(omega)/dt, i.e. the inverse of
// the left-trivialized differential of exp at omega.
Vec3 dexp_inv(const Vec3& omega, const Vec3& w);

}  // namespace geoavoid

#endif  // GEOAVOID_SO3_HPP
