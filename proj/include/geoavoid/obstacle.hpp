#ifndef GEOAVOID_OBSTACLE_HPP
#define GEOAVOID_OBSTACLE_HPP

#include "geoavoid/so3.hpp"

namespace geoavoid {

inline constexpr double kDefaultCollisionGuard = 1e-9;

// Point obstacle on SO(3) with repulsion strength tau > 0.
struct Obstacle {
    Rotation Q;
    double tau = 1.0;

    // Throws InvalidArgument unless tau is finite and positive.
    static Obstacle make(const Rotation& q, double tau);
};

struct SingularityGuards {
    double cut_locus = kDefaultCutLocusGuard;
    double collision = kDefaultCollisionGuard;
};

// Clearance phi = d(R, Q), throwing CollisionSingularity when phi < guards.collision.
double clearance(const Rotation& r, const Obstacle& obs, const SingularityGuards& guards = {});

// V(R) = tau / d(R, Q)^2.
double potential_value(const Rotation& r, const Obstacle& obs,
                       const SingularityGuards& guards = {});

// Body-frame gradient (tau / phi^4) log(R^T Q). Points from R toward Q and has
// magnitude tau / phi^3. This is half the Riemannian gradient of V
// (dV(w) = 2 <grad_body, w>); the factor is absorbed into tau.
Vec3 grad_body(const Rotation& r, const Obstacle& obs, const SingularityGuards& guards = {});

}  // namespace geoavoid

#endif  // GEOAVOID_OBSTACLE_HPP
