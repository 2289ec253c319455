#include "geoavoid/shooting.hpp"

#include <array>
#include <cmath>
#include <future>
#include <limits>

#include <Eigen/QR>

#include "geoavoid/errors.hpp"

namespace geoavoid {

namespace {

struct Shot {
    Vec6 residual;
    Trajectory trajectory;
};

Shot shoot(const Vec6& x, const BoundaryData& bd, const SolverParams& p, Manifold m)
{
    BodyState s0{bd.R0, bd.v0, x.head<3>(), x.tail<3>()};
    Shot shot;
    try {
        shot.trajectory = integrate(s0, p, m);
        const BodyState& end = shot.trajectory.samples.back().state;
        shot.residual.head<3>() = riemannian_log(end.R, bd.RT, p.guards.cut_locus);
        shot.residual.tail<3>() = end.v - bd.vT;
    } catch (const GeoError& e) {
        throw GeoError(ErrorKind::InfeasibleShot, std::string("infeasible shot: ") + e.what());
    }
    if (!shot.residual.allFinite()) {
        throw GeoError(ErrorKind::InfeasibleShot, "infeasible shot: non-finite residual");
    }
    return shot;
}

Vec6 pack(const Vec3& a, const Vec3& b)
{
    Vec6 x;
    x << a, b;
    return x;
}

}  // namespace

Vec6 shooting_residual(const Vec3& a0, const Vec3& j0, const BoundaryData& bd,
                       const SolverParams& p, Manifold m)
{
    return shoot(pack(a0, j0), bd, p, m).residual;
}

ShootingResult solve_bvp(const BoundaryData& bd, const SolverParams& p,
                         std::optional<std::pair<Vec3, Vec3>> init, const ShootingOptions& opts)
{
    Vec6 x = init ? pack(init->first, init->second) : Vec6::Zero();
    Shot current = shoot(x, bd, p, opts.manifold);
    double norm = current.residual.norm();

    int iter = 0;
    while (norm > opts.tol) {
        if (iter >= opts.max_iterations) {
            throw NoConvergenceError(norm, iter);
        }
        ++iter;

        // Probe shots are independent of each other.
        std::array<std::future<std::optional<Vec6>>, 6> probes;
        for (int i = 0; i < 6; ++i) {
            probes[i] = std::async(std::launch::async, [&, i]() -> std::optional<Vec6> {
                for (double dir : {1.0, -1.0}) {
                    Vec6 xp = x;
                    xp[i] += dir * opts.probe_step;
                    try {
                        return (shoot(xp, bd, p, opts.manifold).residual - current.residual)
                               / (dir * opts.probe_step);
                    } catch (const GeoError&) {
                    }
                }
                return std::nullopt;
            });
        }
        Eigen::Matrix<double, 6, 6> jac;
        for (int i = 0; i < 6; ++i) {
            auto col = probes[i].get();
            if (!col) {
                throw NoConvergenceError(norm, iter);
            }
            jac.col(i) = *col;
        }

        const Vec6 dx = jac.colPivHouseholderQr().solve(-current.residual);
        if (!dx.allFinite()) {
            throw NoConvergenceError(norm, iter);
        }

        bool accepted = false;
        for (double lambda = 1.0; lambda >= opts.min_damping; lambda *= 0.5) {
            const Vec6 trial_x = x + lambda * dx;
            try {
                Shot trial = shoot(trial_x, bd, p, opts.manifold);
                const double trial_norm = trial.residual.norm();
                if (trial_norm * trial_norm
                    <= (1.0 - 2.0 * opts.armijo_c * lambda) * norm * norm) {
                    x = trial_x;
                    current = std::move(trial);
                    norm = trial_norm;
                    accepted = true;
                    break;
                }
            } catch (const GeoError& e) {
                if (e.kind() != ErrorKind::InfeasibleShot) {
                    throw;
                }
            }
        }
        if (!accepted) {
            throw NoConvergenceError(norm, iter);
        }
    }

    ShootingResult result;
    result.a0 = x.head<3>();
    result.j0 = x.tail<3>();
    result.residual_norm = norm;
    result.iterations = iter;
    result.trajectory = std::move(current.trajectory);
    return result;
}

}  // namespace geoavoid
