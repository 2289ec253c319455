#ifndef GEOAVOID_SPHERE_HPP
#define GEOAVOID_SPHERE_HPP

#include <numbers>

#include "geoavoid/obstacle.hpp"
#include "geoavoid/so3.hpp"

namespace geoavoid {

// Unit vector on S^2 = SO(3)/SO(2), where SO(2) is the stabilizer of e1.
class SpherePoint {
public:
    SpherePoint() : u_(Vec3::UnitX()) {}

    // Throws InvalidArgument unless | ||u|| - 1 | <= 1e-9.
    static SpherePoint from_vector(const Vec3& u);
    // Rescales a nonzero vector onto the sphere.
    static SpherePoint normalized(const Vec3& u);

    const Vec3& vector() const noexcept { return u_; }

private:
    explicit SpherePoint(const Vec3& u) : u_(u) {}
    Vec3 u_;
};

struct ObstacleLiftSpec {
    SpherePoint q;
    double free_angle = std::numbers::pi / 4.0;  // angle along the fiber over q
    double tau = 1.0;
};

// pi(R) = R e1.
SpherePoint project(const Rotation& r);

// Minimal rotation carrying e1 onto q (identity for q = e1). Throws
// AntipodalLift when q is within 1e-9 of -e1.
Rotation align_e1(const SpherePoint& q);

// Q = align_e1(q) exp(free_angle e1), so that pi(Q) = q.
Obstacle lift_obstacle(const ObstacleLiftSpec& spec);

// Orthogonal projection of so(3) = s + m onto m = span{e2, e3}.
inline Vec3 horizontal_project(const Vec3& w) { return {0.0, w.y(), w.z()}; }

// Great-circle distance in [0, pi].
double sphere_distance(const SpherePoint& p, const SpherePoint& r);

}  // namespace geoavoid

#endif  // GEOAVOID_SPHERE_HPP
