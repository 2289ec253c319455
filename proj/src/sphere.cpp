#include "geoavoid/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "geoavoid/errors.hpp"

namespace geoavoid {

SpherePoint SpherePoint::from_vector(const Vec3& u)
{
    if (!u.allFinite() || std::abs(u.norm() - 1.0) > 1e-9) {
        throw GeoError(ErrorKind::InvalidArgument, "sphere point must have unit norm");
    }
    return SpherePoint(u);
}

SpherePoint SpherePoint::normalized(const Vec3& u)
{
    const double n = u.norm();
    if (!std::isfinite(n) || n == 0.0) {
        throw GeoError(ErrorKind::InvalidArgument, "cannot normalize a zero vector onto S^2");
    }
    return SpherePoint(u / n);
}

SpherePoint project(const Rotation& r)
{
    return SpherePoint::normalized(r.matrix().col(0));
}

Rotation align_e1(const SpherePoint& q)
{
    const Vec3& u = q.vector();
    const Vec3 e1 = Vec3::UnitX();
    if ((u + e1).norm() <= 1e-9) {
        throw GeoError(ErrorKind::AntipodalLift,
                       "obstacle is antipodal to e1; the minimal lift is undefined");
    }
    const Vec3 axis = e1.cross(u);
    const double s = axis.norm();
    if (s == 0.0) {
        return Rotation::identity();
    }
    const double angle = std::atan2(s, e1.dot(u));
    return exp_so3(axis * (angle / s));
}

Obstacle lift_obstacle(const ObstacleLiftSpec& spec)
{
    const Rotation q = align_e1(spec.q) * exp_so3(spec.free_angle * Vec3::UnitX());
    return Obstacle::make(q, spec.tau);
}

double sphere_distance(const SpherePoint& p, const SpherePoint& r)
{
    return std::acos(std::clamp(p.vector().dot(r.vector()), -1.0, 1.0));
}

}  // namespace geoavoid
