#include "geoavoid/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "geoavoid/shooting.hpp"

namespace geoavoid {

using nlohmann::json;

std::string_view to_string(Experiment e)
{
    switch (e) {
    case Experiment::Geodesic: return "geodesic";
    case Experiment::AvoidGeodesic: return "avoid_geodesic";
    case Experiment::TensionAvoid: return "tension_avoid";
    case Experiment::TensionSweep: return "tension_sweep";
    case Experiment::CustomIvp: return "custom_ivp";
    case Experiment::CustomBvp: return "custom_bvp";
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view s)
{
    for (Experiment e : {Experiment::Geodesic, Experiment::AvoidGeodesic, Experiment::TensionAvoid,
                         Experiment::TensionSweep, Experiment::CustomIvp, Experiment::CustomBvp}) {
        if (s == to_string(e)) {
            return e;
        }
    }
    return std::nullopt;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidRotation:
    case ErrorKind::AntipodalLift:
        return kExitConfig;
    case ErrorKind::CollisionSingularity: return kExitCollision;
    case ErrorKind::NearCutLocus: return kExitCutLocus;
    case ErrorKind::NoConvergence:
    case ErrorKind::InfeasibleShot:
        return kExitNoConvergence;
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::HorizontalityViolation: return kExitHorizontality;
    case ErrorKind::NotSkew: return kExitOther;
    }
    return kExitOther;
}

ExperimentConfig ExperimentConfig::defaults(Experiment e)
{
    ExperimentConfig cfg;
    cfg.experiment = e;
    switch (e) {
    case Experiment::Geodesic:
        cfg.tau = 0.0;
        break;
    case Experiment::AvoidGeodesic:
        break;
    case Experiment::TensionAvoid:
    case Experiment::TensionSweep:
        cfg.sigma = 1.0;
        cfg.T = 0.5;
        cfg.v0 = Vec3(0.0, 4.0, -1.0);
        cfg.a0 = Vec3(0.0, -0.3, 0.5);
        cfg.j0 = Vec3(0.0, -1.0, 2.0);
        if (e == Experiment::TensionSweep) {
            cfg.tau_list = {1.0, 50.0, 200.0, 400.0};
        }
        break;
    case Experiment::CustomIvp:
    case Experiment::CustomBvp:
        cfg.tau = 0.0;
        cfg.manifold = Manifold::SO3;
        break;
    }
    return cfg;
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw GeoError(ErrorKind::InvalidArgument, msg); };
    for (double x : {sigma, tau, h, T, free_angle}) {
        if (!std::isfinite(x)) {
            fail("configuration contains a non-finite number");
        }
    }
    for (const Vec3* w : {&v0, &a0, &j0, &target_rotvec, &vT}) {
        if (!w->allFinite()) {
            fail("configuration contains a non-finite vector");
        }
    }
    if (sigma < 0.0) {
        fail("sigma must be non-negative");
    }
    if (tau < 0.0) {
        fail("tau must be non-negative");
    }
    if (!(h > 0.0) || !(T > 0.0) || h > T) {
        fail("need 0 < h <= T");
    }
    const double ts = effective_t_star();
    if (!std::isfinite(ts) || ts <= 0.0 || ts >= T) {
        fail("t_star must lie in (0, T)");
    }
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!std::isfinite(tau_list[i]) || tau_list[i] <= 0.0) {
            fail("tau_list entries must be positive");
        }
        if (i > 0 && tau_list[i] <= tau_list[i - 1]) {
            fail("tau_list must be strictly increasing");
        }
    }
    if (experiment == Experiment::TensionSweep && tau_list.empty()) {
        fail("tension_sweep needs a non-empty tau_list");
    }
}

namespace {

json vec_json(const Vec3& v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Vec3 vec_from_json(const json& j, const char* key)
{
    if (!j.is_array() || j.size() != 3) {
        throw GeoError(ErrorKind::InvalidArgument, std::string(key) + " must be a 3-element array");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json mat_json(const Mat3& m)
{
    json rows = json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
    }
    return rows;
}

}  // namespace

json to_json(const ExperimentConfig& cfg)
{
    json j;
    j["experiment"] = std::string(to_string(cfg.experiment));
    j["sigma"] = cfg.sigma;
    j["tau"] = cfg.tau;
    j["tau_list"] = cfg.tau_list;
    j["h"] = cfg.h;
    j["T"] = cfg.T;
    j["method"] = std::string(to_string(cfg.method));
    j["manifold"] = std::string(to_string(cfg.manifold));
    j["v0"] = vec_json(cfg.v0);
    j["a0"] = vec_json(cfg.a0);
    j["j0"] = vec_json(cfg.j0);
    j["t_star"] = cfg.effective_t_star();
    j["free_angle"] = cfg.free_angle;
    j["target_rotvec"] = vec_json(cfg.target_rotvec);
    j["vT"] = vec_json(cfg.vT);
    j["obstacle_rotvec"] = cfg.obstacle_rotvec ? vec_json(*cfg.obstacle_rotvec) : json(nullptr);
    return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig cfg)
{
    if (!j.is_object()) {
        throw GeoError(ErrorKind::InvalidArgument, "configuration must be a JSON object");
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "experiment") {
                auto e = parse_experiment(value.get<std::string>());
                if (!e) {
                    throw GeoError(ErrorKind::InvalidArgument, "unknown experiment " + value.dump());
                }
                cfg.experiment = *e;
            } else if (key == "sigma") {
                cfg.sigma = value.get<double>();
            } else if (key == "tau") {
                cfg.tau = value.get<double>();
            } else if (key == "tau_list") {
                cfg.tau_list = value.get<std::vector<double>>();
            } else if (key == "h") {
                cfg.h = value.get<double>();
            } else if (key == "T") {
                cfg.T = value.get<double>();
            } else if (key == "method") {
                auto m = parse_method(value.get<std::string>());
                if (!m) {
                    throw GeoError(ErrorKind::InvalidArgument, "unknown method " + value.dump());
                }
                cfg.method = *m;
            } else if (key == "manifold") {
                auto m = parse_manifold(value.get<std::string>());
                if (!m) {
                    throw GeoError(ErrorKind::InvalidArgument, "unknown manifold " + value.dump());
                }
                cfg.manifold = *m;
            } else if (key == "v0") {
                cfg.v0 = vec_from_json(value, "v0");
            } else if (key == "a0") {
                cfg.a0 = vec_from_json(value, "a0");
            } else if (key == "j0") {
                cfg.j0 = vec_from_json(value, "j0");
            } else if (key == "t_star") {
                cfg.t_star = value.is_null() ? std::nullopt : std::optional(value.get<double>());
            } else if (key == "free_angle") {
                cfg.free_angle = value.get<double>();
            } else if (key == "target_rotvec") {
                cfg.target_rotvec = vec_from_json(value, "target_rotvec");
            } else if (key == "vT") {
                cfg.vT = vec_from_json(value, "vT");
            } else if (key == "obstacle_rotvec") {
                cfg.obstacle_rotvec = value.is_null()
                                          ? std::nullopt
                                          : std::optional(vec_from_json(value, "obstacle_rotvec"));
            } else if (key == "out") {
                cfg.out_dir = value.get<std::string>();
            } else {
                throw GeoError(ErrorKind::InvalidArgument, "unknown configuration key " + key);
            }
        }
    } catch (const json::exception& e) {
        throw GeoError(ErrorKind::InvalidArgument, std::string("bad configuration value: ") + e.what());
    }
    return cfg;
}

PlacedObstacle place_obstacle(const Trajectory& reference, double t_star, double free_angle,
                              double tau)
{
    if (reference.samples.size() < 2) {
        throw GeoError(ErrorKind::InvalidArgument, "reference trajectory too short");
    }
    const double h = reference.samples[1].t - reference.samples[0].t;
    const auto idx = static_cast<std::size_t>(std::llround(t_star / h));
    if (idx >= reference.samples.size()) {
        throw GeoError(ErrorKind::InvalidArgument, "t_star beyond the reference horizon");
    }
    PlacedObstacle placed;
    placed.q = project(reference.samples[idx].state.R);
    placed.t_star = reference.samples[idx].t;
    placed.free_angle = free_angle;
    placed.obstacle = lift_obstacle({placed.q, free_angle, tau});
    return placed;
}

const RunArtifact* ExperimentResult::find(std::string_view name) const
{
    for (const auto& r : runs) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

double sup_sphere_distance(const Trajectory& lhs, const Trajectory& rhs)
{
    if (lhs.samples.size() != rhs.samples.size()) {
        throw GeoError(ErrorKind::InvalidArgument, "trajectories have different lengths");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.samples.size(); ++i) {
        worst = std::max(worst, sphere_distance(project(lhs.samples[i].state.R),
                                                project(rhs.samples[i].state.R)));
    }
    return worst;
}

namespace {

SolverParams params_from(const ExperimentConfig& cfg)
{
    SolverParams p;
    p.sigma = cfg.sigma;
    p.h = cfg.h;
    p.T = cfg.T;
    p.method = cfg.method;
    return p;
}

BodyState initial_state(const ExperimentConfig& cfg)
{
    return BodyState{Rotation::identity(), cfg.v0, cfg.a0, cfg.j0};
}

json obstacle_json(const PlacedObstacle& placed)
{
    json j;
    j["q"] = vec_json(placed.q.vector());
    j["Q"] = mat_json(placed.obstacle.Q.matrix());
    j["tau"] = placed.obstacle.tau;
    j["t_star"] = placed.t_star;
    j["free_angle"] = placed.free_angle;
    return j;
}

json base_metadata(const ExperimentConfig& cfg, const std::string& run, const SolverParams& p,
                   Manifold m)
{
    json j;
    j["schema"] = kMetadataSchema;
    j["version"] = std::string(kVersion);
    j["run"] = run;
    j["config"] = to_json(cfg);
    j["method"] = std::string(to_string(p.method));
    j["manifold"] = std::string(to_string(m));
    j["sigma"] = p.sigma;
    j["h"] = p.h;
    j["T"] = p.T;
    j["tau"] = p.obstacle ? p.obstacle->tau : 0.0;
    return j;
}

void record_outcome(json& meta, const Trajectory& traj)
{
    meta["status"] = "ok";
    meta["cost_J"] = traj.cost_J;
    const double mc = traj.min_clearance();
    meta["min_clearance"] = std::isfinite(mc) ? json(mc) : json(nullptr);
}

void record_failure(json& meta, const GeoError& e)
{
    meta["status"] = "failed";
    meta["error"] = to_string(e.kind());
    meta["message"] = e.what();
    meta["step_index"] = e.step_index() ? json(*e.step_index()) : json(nullptr);
}

// Integrates one run, capturing a failure in the artifact's metadata.
RunArtifact run_one(const ExperimentConfig& cfg, const std::string& name, const SolverParams& p,
                    Manifold m, std::optional<GeoError>& failure)
{
    RunArtifact art{name, std::nullopt, p, m, base_metadata(cfg, name, p, m)};
    try {
        art.trajectory = integrate(initial_state(cfg), p, m);
        record_outcome(art.metadata, *art.trajectory);
    } catch (const GeoError& e) {
        record_failure(art.metadata, e);
        if (!failure) {
            failure = e;
        }
    }
    return art;
}

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string tau_label(double tau)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", tau);
    return buf;
}

// Shared reference integration and obstacle placement for the avoidance runs.
struct AvoidSetup {
    RunArtifact reference;
    PlacedObstacle placed;
};

std::optional<AvoidSetup> prepare_avoid(const ExperimentConfig& cfg, ExperimentResult& out,
                                        Manifold m, double tau)
{
    const std::string prefix(to_string(cfg.experiment));
    RunArtifact ref = run_one(cfg, prefix + "_reference", params_from(cfg), m, out.failure);
    if (!ref.trajectory) {
        out.runs.push_back(std::move(ref));
        return std::nullopt;
    }
    try {
        PlacedObstacle placed =
            place_obstacle(*ref.trajectory, cfg.effective_t_star(), cfg.free_angle, tau);
        ref.metadata["obstacle"] = obstacle_json(placed);
        out.obstacle = placed;
        return AvoidSetup{std::move(ref), placed};
    } catch (const GeoError& e) {
        record_failure(ref.metadata, e);
        out.failure = e;
        out.runs.push_back(std::move(ref));
        return std::nullopt;
    }
}

}  // namespace

ExperimentResult run_geodesic(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult out{cfg, {}, {}, std::nullopt, std::nullopt};
    out.runs.push_back(run_one(cfg, "geodesic", params_from(cfg), Manifold::Sphere, out.failure));
    return out;
}

ExperimentResult run_avoid(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult out{cfg, {}, {}, std::nullopt, std::nullopt};
    const Manifold m = cfg.experiment == Experiment::CustomIvp ? cfg.manifold : Manifold::Sphere;
    // tau = 0 switches the potential off; the avoidance run is then the reference.
    const double tau = cfg.tau > 0.0 ? cfg.tau : 1.0;
    auto setup = prepare_avoid(cfg, out, m, tau);
    if (!setup) {
        return out;
    }
    SolverParams p = params_from(cfg);
    if (cfg.tau > 0.0) {
        p.obstacle = setup->placed.obstacle;
    }
    const std::string prefix(to_string(cfg.experiment));
    RunArtifact avoid = run_one(cfg, prefix + "_avoid", p, m, out.failure);
    avoid.metadata["obstacle"] = obstacle_json(setup->placed);
    if (avoid.trajectory) {
        const double dev = sup_sphere_distance(*setup->reference.trajectory, *avoid.trajectory);
        avoid.metadata["max_deviation_from_reference"] = dev;
    }
    out.runs.push_back(std::move(setup->reference));
    out.runs.push_back(std::move(avoid));
    return out;
}

ExperimentResult run_tension_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult out{cfg, {}, {}, std::nullopt, std::nullopt};
    auto setup = prepare_avoid(cfg, out, Manifold::Sphere, cfg.tau_list.front());
    if (!setup) {
        return out;
    }

    std::vector<std::future<RunArtifact>> jobs;
    std::vector<std::optional<GeoError>> failures(cfg.tau_list.size());
    for (std::size_t i = 0; i < cfg.tau_list.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            SolverParams p = params_from(cfg);
            PlacedObstacle placed = setup->placed;
            placed.obstacle.tau = cfg.tau_list[i];
            p.obstacle = placed.obstacle;
            RunArtifact art = run_one(cfg, "tension_sweep_tau_" + tau_label(cfg.tau_list[i]), p,
                                      Manifold::Sphere, failures[i]);
            art.metadata["obstacle"] = obstacle_json(placed);
            return art;
        }));
    }

    out.runs.push_back(std::move(setup->reference));
    std::size_t ok = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        RunArtifact art = jobs[i].get();
        SweepRow row;
        row.tau = cfg.tau_list[i];
        if (art.trajectory) {
            row.ok = true;
            row.min_clearance = art.trajectory->min_clearance();
            row.cost_J = art.trajectory->cost_J;
            ++ok;
        } else {
            row.error = failures[i] ? to_string(failures[i]->kind()) : "unknown";
        }
        out.sweep.push_back(row);
        out.runs.push_back(std::move(art));
    }
    if (ok == 0 && !out.failure) {
        out.failure = failures.front();
    }
    return out;
}

ExperimentResult run_custom_ivp(const ExperimentConfig& cfg)
{
    if (cfg.tau > 0.0) {
        return run_avoid(cfg);
    }
    cfg.validate();
    ExperimentResult out{cfg, {}, {}, std::nullopt, std::nullopt};
    out.runs.push_back(run_one(cfg, "custom_ivp", params_from(cfg), cfg.manifold, out.failure));
    return out;
}

ExperimentResult run_custom_bvp(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentResult out{cfg, {}, {}, std::nullopt, std::nullopt};
    SolverParams p = params_from(cfg);
    if (cfg.tau > 0.0) {
        if (!cfg.obstacle_rotvec) {
            throw GeoError(ErrorKind::InvalidArgument, "custom_bvp with tau > 0 needs obstacle_rotvec");
        }
        p.obstacle = Obstacle::make(exp_so3(*cfg.obstacle_rotvec), cfg.tau);
    }
    BoundaryData bd{Rotation::identity(), cfg.v0, exp_so3(cfg.target_rotvec), cfg.vT};
    ShootingOptions opts;
    opts.manifold = cfg.manifold;
    RunArtifact art{"custom_bvp", std::nullopt, p, cfg.manifold,
                    base_metadata(cfg, "custom_bvp", p, cfg.manifold)};
    try {
        ShootingResult res = solve_bvp(bd, p, std::pair{cfg.a0, cfg.j0}, opts);
        record_outcome(art.metadata, res.trajectory);
        art.metadata["bvp"] = {{"a0", vec_json(res.a0)},
                               {"j0", vec_json(res.j0)},
                               {"residual_norm", res.residual_norm},
                               {"iterations", res.iterations}};
        art.trajectory = std::move(res.trajectory);
    } catch (const NoConvergenceError& e) {
        record_failure(art.metadata, e);
        art.metadata["bvp"] = {{"residual_norm", e.best_residual()}, {"iterations", e.iterations()}};
        out.failure = e;
    } catch (const GeoError& e) {
        record_failure(art.metadata, e);
        out.failure = e;
    }
    out.runs.push_back(std::move(art));
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.experiment) {
    case Experiment::Geodesic: return run_geodesic(cfg);
    case Experiment::AvoidGeodesic:
    case Experiment::TensionAvoid:
        return run_avoid(cfg);
    case Experiment::TensionSweep: return run_tension_sweep(cfg);
    case Experiment::CustomIvp: return run_custom_ivp(cfg);
    case Experiment::CustomBvp: return run_custom_bvp(cfg);
    }
    throw GeoError(ErrorKind::InvalidArgument, "unknown experiment");
}

std::string trajectory_csv(const Trajectory& traj)
{
    std::string out =
        "t,r11,r12,r13,r21,r22,r23,r31,r32,r33,x,y,z,v1,v2,v3,a1,a2,a3,j1,j2,j3,phi_clearance\n";
    for (const auto& s : traj.samples) {
        const Mat3& r = s.state.R.matrix();
        const Vec3 x = r.col(0);
        out += fmt17(s.t);
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) {
                out += ',' + fmt17(r(i, k));
            }
        }
        for (const Vec3* w : {&x, &s.state.v, &s.state.a, &s.state.j}) {
            for (int i = 0; i < 3; ++i) {
                out += ',' + fmt17((*w)[i]);
            }
        }
        out += ',';
        if (s.clearance_phi) {
            out += fmt17(*s.clearance_phi);
        }
        out += '\n';
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw GeoError(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    f << content;
    f.close();
    if (!f) {
        throw GeoError(ErrorKind::Io, "failed writing " + path.string());
    }
}

}  // namespace

void export_trajectory(const Trajectory& traj, const json& metadata,
                       const std::filesystem::path& dir, const std::string& stem)
{
    if (traj.samples.empty()) {
        throw GeoError(ErrorKind::InvalidArgument, "cannot export an empty trajectory");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw GeoError(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    }
    write_file(dir / (stem + ".csv"), trajectory_csv(traj));
    json meta = metadata;
    meta["csv"] = stem + ".csv";
    meta["rows"] = traj.samples.size();
    write_file(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
}

Trajectory read_trajectory_csv(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) {
        throw GeoError(ErrorKind::Io, "cannot open " + path.string());
    }
    std::string line;
    std::getline(f, line);
    Trajectory traj;
    while (std::getline(f, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() == 22) {
            fields.emplace_back();  // trailing empty clearance
        }
        if (fields.size() != 23) {
            throw GeoError(ErrorKind::Io, "malformed CSV row in " + path.string());
        }
        std::vector<double> x(22);
        for (int i = 0; i < 22; ++i) {
            x[i] = std::stod(fields[i]);
        }
        Sample s;
        s.t = x[0];
        Mat3 r;
        r << x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8], x[9];
        s.state.R = Rotation::from_matrix(r);
        s.state.v = Vec3(x[13], x[14], x[15]);
        s.state.a = Vec3(x[16], x[17], x[18]);
        s.state.j = Vec3(x[19], x[20], x[21]);
        if (!fields[22].empty()) {
            s.clearance_phi = std::stod(fields[22]);
        }
        traj.samples.push_back(s);
    }
    return traj;
}

void write_artifacts(const ExperimentResult& result)
{
    const auto& dir = result.config.out_dir;
    for (const auto& run : result.runs) {
        if (run.trajectory) {
            export_trajectory(*run.trajectory, run.metadata, dir, run.name);
        } else {
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            write_file(dir / (run.name + ".meta.json"), run.metadata.dump(2) + "\n");
        }
    }
    if (!result.sweep.empty()) {
        std::string csv = "tau,status,min_clearance,cost_J\n";
        for (const auto& row : result.sweep) {
            csv += fmt17(row.tau) + ',' + (row.ok ? "ok" : row.error) + ',';
            if (row.ok) {
                csv += fmt17(row.min_clearance) + ',' + fmt17(row.cost_J);
            } else {
                csv += ',';
            }
            csv += '\n';
        }
        write_file(dir / "tension_sweep_summary.csv", csv);
    }
}

}  // namespace geoavoid
