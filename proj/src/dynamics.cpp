#include "geoavoid/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "geoavoid/errors.hpp"
#include "geoavoid/sphere.hpp"

namespace geoavoid {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::LieEuler: return "lie_euler";
    case Method::ProjectedEuler: return "projected_euler";
    case Method::LieRK4: return "lie_rk4";
    }
    return "unknown";
}

std::string_view to_string(Manifold m)
{
    return m == Manifold::SO3 ? "so3" : "sphere";
}

std::optional<Method> parse_method(std::string_view s)
{
    for (Method m : {Method::LieEuler, Method::ProjectedEuler, Method::LieRK4}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

std::optional<Manifold> parse_manifold(std::string_view s)
{
    if (s == "so3") {
        return Manifold::SO3;
    }
    if (s == "sphere") {
        return Manifold::Sphere;
    }
    return std::nullopt;
}

std::size_t SolverParams::step_count() const
{
    if (!(h > 0.0) || !(T > 0.0) || !std::isfinite(h) || !std::isfinite(T) || h > T) {
        throw GeoError(ErrorKind::InvalidArgument, "step size and horizon must satisfy 0 < h <= T");
    }
    const double ratio = T / h;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * n) {
        throw GeoError(ErrorKind::InvalidArgument,
                       "horizon T = " + std::to_string(T) + " is not a multiple of h = "
                           + std::to_string(h));
    }
    return static_cast<std::size_t>(n);
}

double Trajectory::min_clearance() const
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        if (s.clearance_phi && *s.clearance_phi < best) {
            best = *s.clearance_phi;
        }
    }
    return best;
}

namespace {

Vec3 half_gradient(const BodyState& s, const SolverParams& p)
{
    if (!p.obstacle) {
        return Vec3::Zero();
    }
    return 0.5 * grad_body(s.R, *p.obstacle, p.guards);
}

void require_horizontal(const Vec3& w, const char* name)
{
    if (std::abs(w.x()) > 1e-9) {
        throw GeoError(ErrorKind::HorizontalityViolation,
                       std::string("sphere dynamics: ") + name + " has a vertical component "
                           + std::to_string(w.x()));
    }
}

}  // namespace

StateDerivative rhs_so3(const BodyState& s, const SolverParams& p)
{
    StateDerivative d;
    d.dR = s.R.matrix() * hat(s.v);
    d.dv = s.a;
    d.da = s.j;
    d.dj = p.sigma * s.a + s.j.cross(s.v) - half_gradient(s, p);
    return d;
}

StateDerivative rhs_sphere(const BodyState& s, const SolverParams& p)
{
    require_horizontal(s.v, "v");
    require_horizontal(s.a, "v'");
    require_horizontal(s.j, "v''");
    StateDerivative d;
    d.dR = s.R.matrix() * hat(s.v);
    d.dv = s.a;
    d.da = s.j;
    d.dj = horizontal_project(p.sigma * s.a + s.a.cross(s.v).cross(s.v) - half_gradient(s, p));
    return d;
}

StateDerivative rhs(const BodyState& s, const SolverParams& p, Manifold m)
{
    return m == Manifold::SO3 ? rhs_so3(s, p) : rhs_sphere(s, p);
}

namespace {

// Vector part of the state, advanced additively.
BodyState advance_vectors(const BodyState& s, const StateDerivative& d, double dt)
{
    BodyState out = s;
    out.v += dt * d.dv;
    out.a += dt * d.da;
    out.j += dt * d.dj;
    return out;
}

// Runge-Kutta-Munthe-Kaas with the classical tableau. The rotation is
// written R0 exp(omega) and omega' = dexp_inv(omega, v).
BodyState rk4_step(const BodyState& s, const SolverParams& p, Manifold m)
{
    const double h = p.h;

    auto stage = [&](const Vec3& omega, const BodyState& y) {
        StateDerivative d = rhs(y, p, m);
        return std::pair{dexp_inv(omega, y.v), d};
    };

    const auto [w1, k1] = stage(Vec3::Zero(), s);

    Vec3 om2 = 0.5 * h * w1;
    BodyState y2 = advance_vectors(s, k1, 0.5 * h);
    y2.R = s.R * exp_so3(om2);
    const auto [w2, k2] = stage(om2, y2);

    Vec3 om3 = 0.5 * h * w2;
    BodyState y3 = advance_vectors(s, k2, 0.5 * h);
    y3.R = s.R * exp_so3(om3);
    const auto [w3, k3] = stage(om3, y3);

    Vec3 om4 = h * w3;
    BodyState y4 = advance_vectors(s, k3, h);
    y4.R = s.R * exp_so3(om4);
    const auto [w4, k4] = stage(om4, y4);

    const double c = h / 6.0;
    BodyState out = s;
    out.v += c * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    out.a += c * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da);
    out.j += c * (k1.dj + 2.0 * k2.dj + 2.0 * k3.dj + k4.dj);
    out.R = s.R * exp_so3(c * (w1 + 2.0 * w2 + 2.0 * w3 + w4));
    return out;
}

}  // namespace

BodyState step(const BodyState& s, const SolverParams& p, Manifold m)
{
    switch (p.method) {
    case Method::LieEuler: {
        const StateDerivative d = rhs(s, p, m);
        BodyState out = advance_vectors(s, d, p.h);
        out.R = s.R * exp_so3(p.h * s.v);
        return out;
    }
    case Method::ProjectedEuler: {
        const StateDerivative d = rhs(s, p, m);
        BodyState out = advance_vectors(s, d, p.h);
        out.R = Rotation::orthonormalize(s.R.matrix() + p.h * d.dR);
        return out;
    }
    case Method::LieRK4:
        return rk4_step(s, p, m);
    }
    throw GeoError(ErrorKind::InvalidArgument, "unknown integration method");
}

Trajectory integrate(const BodyState& s0, const SolverParams& p, Manifold m)
{
    const std::size_t n = p.step_count();
    Trajectory traj;
    traj.samples.reserve(n + 1);

    auto record = [&](std::size_t k, const BodyState& s) {
        Sample sample{static_cast<double>(k) * p.h, s, std::nullopt};
        if (p.obstacle) {
            sample.clearance_phi = clearance(s.R, *p.obstacle, p.guards);
        }
        traj.samples.push_back(std::move(sample));
    };

    BodyState s = s0;
    std::size_t k = 0;
    try {
        record(0, s);
        for (k = 1; k <= n; ++k) {
            s = step(s, p, m);
            if (!s.v.allFinite() || !s.a.allFinite() || !s.j.allFinite()) {
                throw GeoError(ErrorKind::InvalidArgument, "state became non-finite");
            }
            record(k, s);
        }
    } catch (const GeoError& e) {
        if (e.step_index()) {
            throw;
        }
        throw e.at_step(k);
    }
    traj.cost_J = cost_functional(traj, p);
    return traj;
}

double cost_functional(const Trajectory& traj, const SolverParams& p)
{
    if (traj.samples.empty()) {
        throw GeoError(ErrorKind::InvalidArgument, "cost of an empty trajectory");
    }
    auto integrand = [&](const Sample& s) {
        double f = s.state.a.squaredNorm() + p.sigma * s.state.v.squaredNorm();
        if (p.obstacle) {
            const double phi = s.clearance_phi ? *s.clearance_phi
                                               : clearance(s.state.R, *p.obstacle, p.guards);
            f += p.obstacle->tau / (phi * phi);
        }
        return 0.5 * f;
    };
    double total = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& lo = traj.samples[i - 1];
        const auto& hi = traj.samples[i];
        total += 0.5 * (hi.t - lo.t) * (integrand(lo) + integrand(hi));
    }
    return total;
}

}  // namespace geoavoid
