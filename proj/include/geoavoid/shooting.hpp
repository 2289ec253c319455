#ifndef GEOAVOID_SHOOTING_HPP
#define GEOAVOID_SHOOTING_HPP

#include <optional>
#include <utility>

#include <Eigen/Core>

#include "geoavoid/dynamics.hpp"

namespace geoavoid {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// Endpoint conditions x(0) = R0, x(T) = RT, body velocity v0 at 0 and vT at T.
// The horizon T is taken from the solver parameters.
struct BoundaryData {
    Rotation R0;
    Vec3 v0 = Vec3::Zero();
    Rotation RT;
    Vec3 vT = Vec3::Zero();
};

struct ShootingOptions {
    double tol = 1e-8;
    int max_iterations = 100;
    double probe_step = 1e-6;
    double min_damping = 0x1p-20;
    double armijo_c = 1e-4;
    Manifold manifold = Manifold::SO3;
};

struct ShootingResult {
    Vec3 a0 = Vec3::Zero();
    Vec3 j0 = Vec3::Zero();
    double residual_norm = 0.0;
    int iterations = 0;
    Trajectory trajectory;
};

// (log(R(T)^T RT), v(T) - vT) after integrating from (R0, v0, a0, j0).
// Integration failures are rethrown as InfeasibleShot.
Vec6 shooting_residual(const Vec3& a0, const Vec3& j0, const BoundaryData& bd,
                       const SolverParams& p, Manifold m = Manifold::SO3);

// Damped Newton on the unknown initial derivatives (v'(0), v''(0)) with a
// forward-difference Jacobian and Armijo backtracking on |residual|^2.
// Throws NoConvergenceError or InfeasibleShot.
ShootingResult solve_bvp(const BoundaryData& bd, const SolverParams& p,
                         std::optional<std::pair<Vec3, Vec3>> init = std::nullopt,
                         const ShootingOptions& opts = {});

}  // namespace geoavoid

#endif  // GEOAVOID_SHOOTING_HPP
