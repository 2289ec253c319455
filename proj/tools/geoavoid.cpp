// Command-line driver for the avoidance experiments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "geoavoid/experiment.hpp"

namespace {

using geoavoid::ErrorKind;
using geoavoid::GeoError;

std::vector<double> parse_list(const std::string& text, const char* flag)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw GeoError(ErrorKind::InvalidArgument,
                           std::string("--") + flag + ": cannot parse '" + item + "'");
        }
    }
    return out;
}

geoavoid::Vec3 parse_triple(const std::string& text, const char* flag)
{
    auto xs = parse_list(text, flag);
    if (xs.size() != 3) {
        throw GeoError(ErrorKind::InvalidArgument,
                       std::string("--") + flag + " expects three comma-separated numbers");
    }
    return {xs[0], xs[1], xs[2]};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Variational point-obstacle avoidance on SO(3) and S^2"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(geoavoid::kVersion));

    std::string config_path, experiment, method, manifold, tau_list, v0, a0, j0, target, vT,
        obstacle, out;
    std::optional<double> sigma, tau, h, T, t_star, free_angle;

    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--experiment", experiment,
                   "geodesic | avoid_geodesic | tension_avoid | tension_sweep | custom_ivp | custom_bvp");
    app.add_option("--sigma", sigma, "tension parameter");
    app.add_option("--tau", tau, "obstacle strength (0 disables the obstacle)");
    app.add_option("--tau-list", tau_list, "comma-separated increasing tau values for tension_sweep");
    app.add_option("--h", h, "step size");
    app.add_option("--T", T, "horizon");
    app.add_option("--method", method, "lie_euler | projected_euler | lie_rk4");
    app.add_option("--manifold", manifold, "so3 | sphere (custom experiments)");
    app.add_option("--v0", v0, "initial body velocity x,y,z");
    app.add_option("--a0", a0, "initial v' x,y,z");
    app.add_option("--j0", j0, "initial v'' x,y,z");
    app.add_option("--t-star", t_star, "obstacle placement time on the reference run");
    app.add_option("--free-angle", free_angle, "fiber angle of the lifted obstacle");
    app.add_option("--target", target, "custom_bvp: target pose as a rotation vector");
    app.add_option("--vT", vT, "custom_bvp: target body velocity");
    app.add_option("--obstacle", obstacle, "custom_bvp: obstacle pose as a rotation vector");
    app.add_option("--out", out, "output directory (default $GEOAVOID_OUT_DIR or .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : geoavoid::kExitConfig;
    }

    geoavoid::ExperimentConfig cfg;
    try {
        nlohmann::json file_cfg = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            try {
                file_cfg = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw GeoError(ErrorKind::InvalidArgument,
                               "cannot parse " + config_path + ": " + e.what());
            }
            if (!file_cfg.is_object()) {
                throw GeoError(ErrorKind::InvalidArgument, config_path + " is not a JSON object");
            }
        }

        // Experiment-specific defaults first, then the file, then flags.
        std::string name = experiment;
        if (name.empty() && file_cfg.contains("experiment")) {
            name = file_cfg["experiment"].get<std::string>();
        }
        if (name.empty()) {
            name = "geodesic";
        }
        auto exp = geoavoid::parse_experiment(name);
        if (!exp) {
            throw GeoError(ErrorKind::InvalidArgument, "unknown experiment '" + name + "'");
        }
        cfg = geoavoid::config_from_json(file_cfg, geoavoid::ExperimentConfig::defaults(*exp));
        cfg.experiment = *exp;
        if (!file_cfg.contains("out")) {
            if (const char* env = std::getenv("GEOAVOID_OUT_DIR")) {
                cfg.out_dir = env;
            }
        }

        if (sigma) cfg.sigma = *sigma;
        if (tau) cfg.tau = *tau;
        if (h) cfg.h = *h;
        if (T) cfg.T = *T;
        if (t_star) cfg.t_star = *t_star;
        if (free_angle) cfg.free_angle = *free_angle;
        if (!tau_list.empty()) cfg.tau_list = parse_list(tau_list, "tau-list");
        if (!method.empty()) {
            auto m = geoavoid::parse_method(method);
            if (!m) {
                throw GeoError(ErrorKind::InvalidArgument, "unknown method '" + method + "'");
            }
            cfg.method = *m;
        }
        if (!manifold.empty()) {
            auto m = geoavoid::parse_manifold(manifold);
            if (!m) {
                throw GeoError(ErrorKind::InvalidArgument, "unknown manifold '" + manifold + "'");
            }
            cfg.manifold = *m;
        }
        if (!v0.empty()) cfg.v0 = parse_triple(v0, "v0");
        if (!a0.empty()) cfg.a0 = parse_triple(a0, "a0");
        if (!j0.empty()) cfg.j0 = parse_triple(j0, "j0");
        if (!target.empty()) cfg.target_rotvec = parse_triple(target, "target");
        if (!vT.empty()) cfg.vT = parse_triple(vT, "vT");
        if (!obstacle.empty()) cfg.obstacle_rotvec = parse_triple(obstacle, "obstacle");
        if (!out.empty()) cfg.out_dir = out;
        cfg.validate();
    } catch (const GeoError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return geoavoid::kExitConfig;
    }

    try {
        const geoavoid::ExperimentResult result = geoavoid::run_experiment(cfg);
        geoavoid::write_artifacts(result);

        for (const auto& run : result.runs) {
            std::cout << run.name << ": " << run.metadata.value("status", "?");
            if (run.trajectory) {
                std::cout << "  J=" << run.trajectory->cost_J;
                if (run.params.obstacle) {
                    std::cout << "  min_clearance=" << run.trajectory->min_clearance();
                }
            }
            std::cout << '\n';
        }
        if (result.obstacle) {
            const auto& q = result.obstacle->q.vector();
            std::cout << "obstacle q = (" << q.x() << ", " << q.y() << ", " << q.z() << ")\n";
        }
        if (result.failure) {
            std::cerr << "error: " << result.failure->what() << '\n';
        }
        return result.exit_code();
    } catch (const GeoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return geoavoid::exit_code_for(e.kind());
    }
}
