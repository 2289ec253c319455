#ifndef GEOAVOID_DYNAMICS_HPP
#define GEOAVOID_DYNAMICS_HPP

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "geoavoid/obstacle.hpp"
#include "geoavoid/so3.hpp"

namespace geoavoid {

// Rotation plus body velocity v and its first two time derivatives.
struct BodyState {
    Rotation R;
    Vec3 v = Vec3::Zero();
    Vec3 a = Vec3::Zero();  // v'
    Vec3 j = Vec3::Zero();  // v''
};

struct StateDerivative {
    Mat3 dR = Mat3::Zero();
    Vec3 dv = Vec3::Zero();
    Vec3 da = Vec3::Zero();
    Vec3 dj = Vec3::Zero();
};

enum class Method { LieEuler, ProjectedEuler, LieRK4 };

// Which reduced equation drives v: the full group problem on SO(3), or the
// horizontal problem whose projection R e1 lives on S^2.
enum class Manifold { SO3, Sphere };

std::string_view to_string(Method m);
std::string_view to_string(Manifold m);
std::optional<Method> parse_method(std::string_view s);
std::optional<Manifold> parse_manifold(std::string_view s);

struct SolverParams {
    double sigma = 0.0;  // tension
    double h = 1e-3;
    double T = 1.0;
    Method method = Method::LieEuler;
    std::optional<Obstacle> obstacle;
    SingularityGuards guards;

    // round(T / h); throws InvalidArgument unless h, T are positive and
    // T / h is an integer to within 1e-9 relative.
    std::size_t step_count() const;
};

struct Sample {
    double t = 0.0;
    BodyState state;
    std::optional<double> clearance_phi;
};

struct Trajectory {
    std::vector<Sample> samples;
    double cost_J = 0.0;

    double min_clearance() const;  // +inf when no obstacle was configured
};

// v''' = sigma v' + v'' x v - grad_body / 2, with R' = R hat(v).
StateDerivative rhs_so3(const BodyState& s, const SolverParams& p);

// v''' = P_m(sigma v' + (v' x v) x v - grad_body / 2). Throws
// HorizontalityViolation if v, v' or v'' has a first component above 1e-9.
StateDerivative rhs_sphere(const BodyState& s, const SolverParams& p);

StateDerivative rhs(const BodyState& s, const SolverParams& p, Manifold m);

BodyState step(const BodyState& s, const SolverParams& p, Manifold m);

// Fixed-step integration over [0, T]. Errors raised by the right-hand side are
// rethrown tagged with the index of the failing step.
Trajectory integrate(const BodyState& s0, const SolverParams& p, Manifold m);

// Trapezoidal quadrature of 0.5 (|v'|^2 + sigma |v|^2 + V) over the samples.
// V is evaluated from each sample's recorded clearance as tau / phi^2.
double cost_functional(const Trajectory& traj, const SolverParams& p);

}  // namespace geoavoid

#endif  // GEOAVOID_DYNAMICS_HPP
