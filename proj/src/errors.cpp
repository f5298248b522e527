#include "pulsewave/errors.hpp"

namespace pulsewave {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "InvalidArgument";
        case ErrorKind::unsupported: return "Unsupported";
        case ErrorKind::non_elliptic: return "NonElliptic";
        case ErrorKind::no_bound_found: return "NoBoundFound";
        case ErrorKind::incompatible_grid: return "IncompatibleGrid";
        case ErrorKind::too_large: return "TooLarge";
        case ErrorKind::peclet_violation: return "PecletViolation";
        case ErrorKind::no_convergence: return "NoConvergence";
        case ErrorKind::non_positive_iterate: return "NonPositiveIterate";
        case ErrorKind::degenerate_lambda: return "DegenerateLambda";
        case ErrorKind::boundary_minimum: return "BoundaryMinimum";
        case ErrorKind::subcritical_speed: return "SubcriticalSpeed";
        case ErrorKind::no_root_bracket: return "NoRootBracket";
        case ErrorKind::not_on_dispersion: return "NotOnDispersion";
        case ErrorKind::step_too_large: return "StepTooLarge";
        case ErrorKind::solver_failure: return "SolverFailure";
        case ErrorKind::zero_unstable_violated: return "ZeroUnstableViolated";
        case ErrorKind::front_left_window: return "FrontLeftWindow";
        case ErrorKind::insufficient_record: return "InsufficientRecord";
        case ErrorKind::not_converged: return "NotConverged";
        case ErrorKind::insufficient_decay_region: return "InsufficientDecayRegion";
        case ErrorKind::inadmissible_perturbation: return "InadmissiblePerturbation";
        case ErrorKind::degenerate_series: return "DegenerateSeries";
        case ErrorKind::lambda_out_of_band: return "LambdaOutOfBand";
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::validation_error: return "ValidationError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace pulsewave
