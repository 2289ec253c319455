#include "geoavoid/errors.hpp"

namespace geoavoid {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidRotation: return "InvalidRotation";
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::NearCutLocus: return "NearCutLocus";
    case ErrorKind::CollisionSingularity: return "CollisionSingularity";
    case ErrorKind::HorizontalityViolation: return "HorizontalityViolation";
    case ErrorKind::AntipodalLift: return "AntipodalLift";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InfeasibleShot: return "InfeasibleShot";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

GeoError::GeoError(ErrorKind kind, const std::string& what, std::optional<std::size_t> step)
    : std::runtime_error(step ? what + " (step " + std::to_string(*step) + ")" : what),
      kind_(kind),
      step_(step),
      message_(what)
{
}

GeoError GeoError::at_step(std::size_t step) const
{
    return GeoError(kind_, message_, step);
}

NoConvergenceError::NoConvergenceError(double best_residual, int iterations)
    : GeoError(ErrorKind::NoConvergence,
               "shooting did not converge after " + std::to_string(iterations)
                   + " iterations, best residual " + std::to_string(best_residual)),
      best_residual_(best_residual),
      iterations_(iterations)
{
}

}  // namespace geoavoid
