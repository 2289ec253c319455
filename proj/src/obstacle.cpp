#include "geoavoid/obstacle.hpp"

#include <cmath>
#include <string>

#include "geoavoid/errors.hpp"

namespace geoavoid {

Obstacle Obstacle::make(const Rotation& q, double tau)
{
    if (!std::isfinite(tau) || tau <= 0.0) {
        throw GeoError(ErrorKind::InvalidArgument, "obstacle strength tau must be positive");
    }
    return Obstacle{q, tau};
}

namespace {

Vec3 checked_log(const Rotation& r, const Obstacle& obs, const SingularityGuards& guards)
{
    const Vec3 u = riemannian_log(r, obs.Q, guards.cut_locus);
    if (u.norm() < guards.collision) {
        throw GeoError(ErrorKind::CollisionSingularity,
                       "configuration within " + std::to_string(guards.collision)
                           + " rad of the obstacle");
    }
    return u;
}

}  // namespace

double clearance(const Rotation& r, const Obstacle& obs, const SingularityGuards& guards)
{
    return checked_log(r, obs, guards).norm();
}

double potential_value(const Rotation& r, const Obstacle& obs, const SingularityGuards& guards)
{
    const double phi = clearance(r, obs, guards);
    return obs.tau / (phi * phi);
}

Vec3 grad_body(const Rotation& r, const Obstacle& obs, const SingularityGuards& guards)
{
    const Vec3 u = checked_log(r, obs, guards);
    const double phi2 = u.squaredNorm();
    return (obs.tau / (phi2 * phi2)) * u;
}

}  // namespace geoavoid
