#ifndef GEOAVOID_EXPERIMENT_HPP
#define GEOAVOID_EXPERIMENT_HPP

#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "geoavoid/dynamics.hpp"
#include "geoavoid/errors.hpp"
#include "geoavoid/sphere.hpp"

namespace geoavoid {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kMetadataSchema = 1;

enum class Experiment { Geodesic, AvoidGeodesic, TensionAvoid, TensionSweep, CustomIvp, CustomBvp };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view s);

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitCollision = 3,
    kExitCutLocus = 4,
    kExitNoConvergence = 5,
    kExitIo = 6,
    kExitHorizontality = 7,
    kExitOther = 8,
};

int exit_code_for(ErrorKind kind);

struct ExperimentConfig {
    Experiment experiment = Experiment::Geodesic;
    double sigma = 0.0;
    double tau = 1.0;
    std::vector<double> tau_list;
    double h = 1e-3;
    double T = 1.0;
    Method method = Method::LieEuler;
    Manifold manifold = Manifold::Sphere;
    Vec3 v0 = Vec3(0.0, 0.0, 1.0);
    Vec3 a0 = Vec3::Zero();
    Vec3 j0 = Vec3::Zero();
    std::optional<double> t_star;  // obstacle placement parameter, T/2 when unset
    double free_angle = std::numbers::pi / 4.0;
    // custom_bvp only: target pose as a rotation vector, target body velocity,
    // and an explicit obstacle rotation vector (used when tau > 0).
    Vec3 target_rotvec = Vec3::Zero();
    Vec3 vT = Vec3::Zero();
    std::optional<Vec3> obstacle_rotvec;
    std::filesystem::path out_dir = ".";

    // Values reproducing the corresponding experiment of the reference study.
    static ExperimentConfig defaults(Experiment e);

    double effective_t_star() const { return t_star.value_or(0.5 * T); }

    // Throws InvalidArgument on non-finite values or an unsorted tau list.
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// Overlays the keys present in j onto base. Throws InvalidArgument on bad keys.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base);

struct PlacedObstacle {
    SpherePoint q;
    Obstacle obstacle;
    double t_star = 0.0;
    double free_angle = 0.0;
};

// Puts the obstacle at the projection of the reference trajectory at t_star
// (nearest sample) and lifts it with the given fiber angle.
PlacedObstacle place_obstacle(const Trajectory& reference, double t_star, double free_angle,
                              double tau);

struct RunArtifact {
    std::string name;  // file stem
    std::optional<Trajectory> trajectory;
    SolverParams params;
    Manifold manifold = Manifold::Sphere;
    nlohmann::json metadata;
};

struct SweepRow {
    double tau = 0.0;
    bool ok = false;
    double min_clearance = 0.0;
    double cost_J = 0.0;
    std::string error;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunArtifact> runs;
    std::vector<SweepRow> sweep;
    std::optional<PlacedObstacle> obstacle;
    std::optional<GeoError> failure;

    const RunArtifact* find(std::string_view name) const;
    int exit_code() const { return failure ? exit_code_for(failure->kind()) : kExitOk; }
};

ExperimentResult run_geodesic(const ExperimentConfig& cfg);
ExperimentResult run_avoid(const ExperimentConfig& cfg);
ExperimentResult run_tension_sweep(const ExperimentConfig& cfg);
ExperimentResult run_custom_ivp(const ExperimentConfig& cfg);
ExperimentResult run_custom_bvp(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Maximum pointwise great-circle distance between the projections of two
// trajectories sampled on the same grid.
double sup_sphere_distance(const Trajectory& lhs, const Trajectory& rhs);

// CSV body with columns t, r11..r33, x, y, z, v1..v3, a1..a3, j1..j3,
// phi_clearance; every number printed with 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

// Writes <dir>/<stem>.csv and the sidecar <dir>/<stem>.meta.json.
// Throws GeoError(Io) on failure.
void export_trajectory(const Trajectory& traj, const nlohmann::json& metadata,
                       const std::filesystem::path& dir, const std::string& stem);

// Parses a file written by export_trajectory. The cost field is left at 0.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

// Writes every artifact of a result, plus the sweep summary when present.
void write_artifacts(const ExperimentResult& result);

}  // namespace geoavoid

#endif  // GEOAVOID_EXPERIMENT_HPP
