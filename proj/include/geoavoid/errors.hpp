#ifndef GEOAVOID_ERRORS_HPP
#define GEOAVOID_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace geoavoid {

enum class ErrorKind {
    InvalidArgument,
    InvalidRotation,
    NotSkew,
    NearCutLocus,
    CollisionSingularity,
    HorizontalityViolation,
    AntipodalLift,
    NoConvergence,
    InfeasibleShot,
    Io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this exception. Integration
// errors carry the index of the step whose right-hand side failed.
class GeoError : public std::runtime_error {
public:
    GeoError(ErrorKind kind, const std::string& what,
             std::optional<std::size_t> step = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> step_index() const noexcept { return step_; }

    GeoError at_step(std::size_t step) const;

private:
    ErrorKind kind_;
    std::optional<std::size_t> step_;
    std::string message_;
};

class NoConvergenceError : public GeoError {
public:
    NoConvergenceError(double best_residual, int iterations);

    double best_residual() const noexcept { return best_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double best_residual_;
    int iterations_;
};

}  // namespace geoavoid

#endif  // GEOAVOID_ERRORS_HPP
