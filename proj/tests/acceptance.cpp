// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geoavoid/experiment.hpp"
#include "geoavoid/shooting.hpp"

using namespace geoavoid;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;  // <= 0: no limit
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Vec3 gaussian(std::mt19937_64& rng, double scale)
{
    std::normal_distribution<double> n(0.0, scale);
    return {n(rng), n(rng), n(rng)};
}

Vec3 unit(std::mt19937_64& rng)
{
    Vec3 v;
    do {
        v = gaussian(rng, 1.0);
    } while (v.norm() < 1e-3);
    return v.normalized();
}

BodyState cubic_initial()
{
    return {Rotation::identity(), Vec3(0, 4, -1), Vec3(0, -0.3, 0.5), Vec3(0, -1, 2)};
}

double max_vertical(const Trajectory& traj)
{
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        worst = std::max({worst, std::abs(s.state.v.x()), std::abs(s.state.a.x()),
                          std::abs(s.state.j.x())});
    }
    return worst;
}

// 1. Geodesic reproduction.
Outcome geodesic()
{
    const auto cfg = ExperimentConfig::defaults(Experiment::Geodesic);
    const ExperimentResult res = run_geodesic(cfg);
    if (res.failure) {
        return {false, res.failure->what()};
    }
    const Trajectory& traj = *res.runs[0].trajectory;
    const Vec3 x0 = project(traj.samples[0].state.R).vector();
    const Vec3 x1 = project(traj.samples[1].state.R).vector();
    const Vec3 n = x0.cross(x1).normalized();
    double planarity = 0.0;
    bool v_const = true;
    for (const auto& s : traj.samples) {
        planarity = std::max(planarity, std::abs(project(s.state.R).vector().dot(n)));
        v_const = v_const && s.state.v == cfg.v0;
    }

    auto rk = cfg;
    rk.method = Method::LieRK4;
    const ExperimentResult rk_res = run_geodesic(rk);
    if (rk_res.failure) {
        return {false, rk_res.failure->what()};
    }
    const Mat3 exact = exp_so3(cfg.T * cfg.v0).matrix();
    const double rk_err =
        (rk_res.runs[0].trajectory->samples.back().state.R.matrix() - exact).norm();

    const bool ok = planarity <= 1e-6 && v_const && rk_err <= 1e-10;
    return {ok, "planarity " + fmt("%.2e", planarity) + " (<=1e-6), v constant "
                    + (v_const ? "exactly" : "NO") + ", RK4 |R(T)-exp(Tv)| " + fmt("%.2e", rk_err)
                    + " (<=1e-10)"};
}

// 2. Convergence order against a fine-step reference.
Outcome convergence()
{
    SolverParams ref;
    ref.sigma = 1.0;
    ref.T = 1.0;
    ref.h = 1e-4;
    ref.method = Method::LieRK4;
    const BodyState s0 = cubic_initial();
    const BodyState truth = integrate(s0, ref, Manifold::SO3).samples.back().state;

    const std::vector<double> hs = {4e-3, 2e-3, 1e-3, 5e-4};
    std::string detail;
    bool ok = true;
    for (auto [method, target] : {std::pair{Method::LieEuler, 1.0}, std::pair{Method::LieRK4, 4.0}}) {
        std::vector<double> errs;
        for (double h : hs) {
            SolverParams p = ref;
            p.h = h;
            p.method = method;
            const BodyState end = integrate(s0, p, Manifold::SO3).samples.back().state;
            errs.push_back(distance_so3(end.R, truth.R) + (end.v - truth.v).norm()
                           + (end.a - truth.a).norm() + (end.j - truth.j).norm());
        }
        // least-squares slope of log(err) against log(h)
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            mx += std::log(hs[i]);
            my += std::log(errs[i]);
        }
        mx /= hs.size();
        my /= hs.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            sxy += (std::log(hs[i]) - mx) * (std::log(errs[i]) - my);
            sxx += (std::log(hs[i]) - mx) * (std::log(hs[i]) - mx);
        }
        const double order = sxy / sxx;
        bool pair_ok = std::abs(order - target) <= 0.3;
        std::string pairs;
        for (std::size_t i = 1; i < errs.size(); ++i) {
            const double local = std::log2(errs[i - 1] / errs[i]);
            pair_ok = pair_ok && std::abs(local - target) <= 0.3;
            pairs += (i > 1 ? "/" : "") + fmt("%.2f", local);
        }
        ok = ok && pair_ok;
        detail += std::string(to_string(method)) + " order " + fmt("%.3f", order) + " [" + pairs
                  + "] (" + fmt("%.0f", target) + "+-0.3); ";
    }
    return {ok, detail};
}

// 3. Gradient oracle by central differences.
Outcome gradient_oracle()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(0.2, 2.8);
    std::uniform_real_distribution<double> strength(0.1, 10.0);
    std::vector<double> ratios, fds, pairings;
    for (int i = 0; i < 100; ++i) {
        const Rotation q = exp_so3(unit(rng) * angle(rng));
        const Rotation x = q * exp_so3(unit(rng) * angle(rng));
        const Obstacle obs = Obstacle::make(q, strength(rng));
        const Vec3 g = grad_body(x, obs);
        Vec3 w = unit(rng);
        if (std::abs(g.normalized().dot(w)) < 0.2) {
            w = (w + g.normalized()).normalized();
        }
        const double s = 1e-6;
        const double fd = (potential_value(x * exp_so3(s * w), obs)
                           - potential_value(x * exp_so3(-s * w), obs))
                          / (2 * s);
        fds.push_back(fd);
        pairings.push_back(g.dot(w));
        ratios.push_back(fd / g.dot(w));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    double mean = 0;
    for (double r : ratios) {
        mean += r;
    }
    mean /= ratios.size();
    const double spread = (*hi - *lo) / std::abs(mean);
    double worst = 0.0;
    for (std::size_t i = 0; i < fds.size(); ++i) {
        worst = std::max(worst, std::abs(fds[i] - mean * pairings[i]) / std::abs(fds[i]));
    }
    const bool ok = spread <= 1e-4 && worst <= 1e-5;
    return {ok, "constant " + fmt("%.8f", mean) + ", spread " + fmt("%.2e", spread)
                    + " (<=1e-4), max rel error " + fmt("%.2e", worst) + " (<=1e-5)"};
}

// 4. Obstacle clearance on the geodesic.
Outcome obstacle_clearance()
{
    const auto cfg = ExperimentConfig::defaults(Experiment::AvoidGeodesic);
    const ExperimentResult res = run_avoid(cfg);
    if (res.failure) {
        return {false, res.failure->what()};
    }
    const Trajectory& ref = *res.find("avoid_geodesic_reference")->trajectory;
    const Trajectory& avoid = *res.find("avoid_geodesic_avoid")->trajectory;
    const double min_clear = avoid.min_clearance();
    const double deviation = sup_sphere_distance(ref, avoid);

    // Integration error floor: the same avoidance problem at half the step,
    // compared on the shared grid.
    SolverParams fine = res.find("avoid_geodesic_avoid")->params;
    fine.h = 0.5 * cfg.h;
    const Trajectory half =
        integrate(BodyState{Rotation::identity(), cfg.v0, cfg.a0, cfg.j0}, fine, Manifold::Sphere);
    double floor = 0.0;
    for (std::size_t i = 0; i < avoid.samples.size(); ++i) {
        const Vec3 a = project(avoid.samples[i].state.R).vector();
        const Vec3 b = project(half.samples[2 * i].state.R).vector();
        floor = std::max(floor, 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm())));
    }
    const bool ok = min_clear > 0.0 && deviation > 10.0 * floor;
    return {ok, "min clearance " + fmt("%.6f", min_clear) + ", max deviation " + fmt("%.3e", deviation)
                    + " vs error floor " + fmt("%.3e", floor) + " (need > 10x)"};
}

// 5. Monotone deformation in tau.
Outcome tau_monotone()
{
    const auto cfg = ExperimentConfig::defaults(Experiment::TensionSweep);
    const ExperimentResult res = run_tension_sweep(cfg);
    if (res.failure) {
        return {false, res.failure->what()};
    }
    bool ok = true;
    std::string clear;
    for (std::size_t i = 0; i < res.sweep.size(); ++i) {
        ok = ok && res.sweep[i].ok;
        if (i > 0) {
            ok = ok && res.sweep[i].min_clearance > res.sweep[i - 1].min_clearance;
        }
        clear += (i ? " < " : "") + fmt("%.6f", res.sweep[i].min_clearance);
    }
    const Trajectory& ref = *res.find("tension_sweep_reference")->trajectory;
    const Trajectory& tau1 = *res.find("tension_sweep_tau_1")->trajectory;
    const double sup = sup_sphere_distance(ref, tau1);
    ok = ok && sup <= 1e-3;

    // Horizon dependence of the tau = 1 gap, for the record.
    auto long_cfg = ExperimentConfig::defaults(Experiment::TensionAvoid);
    long_cfg.T = 1.0;
    const ExperimentResult longer = run_avoid(long_cfg);
    std::string info = "n/a";
    if (!longer.failure) {
        info = fmt("%.2e", sup_sphere_distance(*longer.runs[0].trajectory, *longer.runs[1].trajectory));
    }
    return {ok, "T=" + fmt("%g", cfg.T) + " clearances " + clear + "; sup d(tau=0, tau=1) "
                    + fmt("%.2e", sup) + " (<=1e-3) [info: at T=1 it is " + info + "]"};
}

// 6. Horizontality of every sphere run.
Outcome horizontality()
{
    double worst = 0.0;
    std::size_t runs = 0;
    for (Experiment e : {Experiment::Geodesic, Experiment::AvoidGeodesic, Experiment::TensionAvoid,
                         Experiment::TensionSweep}) {
        for (Method m : {Method::LieEuler, Method::ProjectedEuler, Method::LieRK4}) {
            auto cfg = ExperimentConfig::defaults(e);
            cfg.method = m;
            const ExperimentResult res = run_experiment(cfg);
            if (res.failure) {
                return {false, res.failure->what()};
            }
            for (const auto& r : res.runs) {
                worst = std::max(worst, max_vertical(*r.trajectory));
                ++runs;
            }
        }
    }
    return {worst <= 1e-9, std::to_string(runs) + " runs, max |v1|,|a1|,|j1| = " + fmt("%.2e", worst)
                               + " (<=1e-9)"};
}

// 7. Boundary-value recovery.
Outcome bvp()
{
    std::mt19937_64 rng(77);
    int solved = 0, honest_failures = 0, wrong = 0, worst_iter = 0;
    for (int i = 0; i < 20; ++i) {
        SolverParams p;
        p.sigma = 1.0;
        p.T = 1.0;
        p.h = 1e-3;
        p.method = Method::LieRK4;
        const BodyState s0{exp_so3(gaussian(rng, 0.5)), gaussian(rng, 0.5), gaussian(rng, 0.5),
                           gaussian(rng, 0.5)};
        const bool repulsive = i % 2 == 1;
        try {
            if (repulsive) {
                const Trajectory free_run = integrate(s0, p, Manifold::SO3);
                const Rotation mid = free_run.samples[free_run.samples.size() / 2].state.R;
                p.obstacle = Obstacle::make(mid * exp_so3(unit(rng) * 0.8), 10.0);
            }
            const Trajectory fwd = integrate(s0, p, Manifold::SO3);
            const BoundaryData bd{s0.R, s0.v, fwd.samples.back().state.R, fwd.samples.back().state.v};
            const ShootingResult res = solve_bvp(bd, p);
            const double check = shooting_residual(res.a0, res.j0, bd, p).norm();
            if (res.residual_norm <= 1e-8 && check <= 1e-8 && res.iterations <= 100) {
                ++solved;
                worst_iter = std::max(worst_iter, res.iterations);
            } else {
                ++wrong;
            }
        } catch (const GeoError& e) {
            if (e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::InfeasibleShot) {
                ++honest_failures;
            } else {
                ++wrong;
            }
        }
    }
    const bool ok = solved >= 18 && wrong == 0;
    return {ok, std::to_string(solved) + "/20 solved (>=18), " + std::to_string(honest_failures)
                    + " reported NoConvergence, " + std::to_string(wrong)
                    + " wrong answers, max iterations " + std::to_string(worst_iter)};
}

// 8. Exact-arithmetic primitives.
Outcome primitives()
{
    std::mt19937_64 rng(8);
    double hatvee = 0, cross = 0, explog = 0, small = 0, left = 0, ortho_exp = 0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 a = gaussian(rng, 3.0);
        const Vec3 b = gaussian(rng, 3.0);
        hatvee = std::max(hatvee, (vee(hat(a)) - a).norm());
        cross = std::max(cross, (hat(a) * b - a.cross(b)).cwiseAbs().maxCoeff());

        const Vec3 r = unit(rng) * std::uniform_real_distribution<double>(1e-3, std::numbers::pi - 0.1)(rng);
        explog = std::max(explog, (log_so3(exp_so3(r)) - r).norm());
        const Vec3 tiny = unit(rng) * std::uniform_real_distribution<double>(1e-12, 1e-7)(rng);
        small = std::max(small, (log_so3(exp_so3(tiny)) - tiny).norm());

        const Rotation big = exp_so3(gaussian(rng, 4.0));
        ortho_exp = std::max(ortho_exp, big.orthonormality_error());

        const Rotation g = exp_so3(unit(rng) * 2.0);
        const Rotation y = exp_so3(unit(rng) * 1.5);
        const Rotation x = y * exp_so3(unit(rng) * 2.5);
        left = std::max(left, (riemannian_log(g * y, g * x) - riemannian_log(y, x)).norm());
    }

    double manifold = 0.0;
    for (Method m : {Method::LieEuler, Method::LieRK4}) {
        SolverParams p;
        p.sigma = 1.0;
        p.h = 1e-4;
        p.T = 1.0;
        p.method = m;
        const Trajectory traj = integrate(cubic_initial(), p, Manifold::SO3);
        for (const auto& s : traj.samples) {
            manifold = std::max(manifold, s.state.R.orthonormality_error());
        }
    }
    const bool ok = hatvee == 0.0 && cross <= 1e-14 && explog <= 1e-10 && small <= 1e-10
                    && left <= 1e-10 && ortho_exp <= 1e-12 && manifold <= 1e-9;
    return {ok, "hat/vee " + fmt("%.1e", hatvee) + ", cross " + fmt("%.1e", cross) + ", exp/log "
                    + fmt("%.1e", explog) + ", small-angle " + fmt("%.1e", small) + ", left-inv "
                    + fmt("%.1e", left) + ", exp ortho " + fmt("%.1e", ortho_exp)
                    + ", 1e4-step ortho " + fmt("%.1e", manifold)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 9. Byte-identical CSV output across repeated runs.
Outcome determinism()
{
    const fs::path root = fs::temp_directory_path() / "geoavoid_acceptance_determinism";
    fs::remove_all(root);
    std::size_t files = 0;
    for (Experiment e : {Experiment::Geodesic, Experiment::AvoidGeodesic, Experiment::TensionAvoid,
                         Experiment::TensionSweep}) {
        for (const char* tag : {"a", "b"}) {
            auto cfg = ExperimentConfig::defaults(e);
            cfg.out_dir = root / tag;
            write_artifacts(run_experiment(cfg));
        }
    }
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        if (entry.path().extension() != ".csv") {
            continue;
        }
        const fs::path twin = root / "b" / entry.path().filename();
        if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
            return {false, "mismatch in " + entry.path().filename().string()};
        }
        ++files;
    }
    fs::remove_all(root);
    return {files >= 9, std::to_string(files) + " CSV files byte-identical across two runs"};
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "geodesic reproduction", 1.0, geodesic},
        {2, "cubic-in-tension convergence order", 30.0, convergence},
        {3, "potential gradient oracle", 5.0, gradient_oracle},
        {4, "obstacle clearance on the geodesic", 0.0, obstacle_clearance},
        {5, "tau-monotone deformation", 10.0, tau_monotone},
        {6, "horizontality", 0.0, horizontality},
        {7, "boundary-value recovery", 60.0, bvp},
        {8, "SO(3) primitives", 0.0, primitives},
        {9, "determinism", 0.0, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
            out.pass = false;
            out.detail += "; runtime over limit";
        }
        std::printf("[%s] %d. %s (%.2fs%s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.time_limit_s > 0.0 ? (", limit " + fmt("%g", c.time_limit_s) + "s").c_str() : "",
                    out.detail.c_str());
        failed += out.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
