#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pulsewave {

/// Failure categories raised by the library. The CLI maps them to exit codes.
enum class ErrorKind {
    invalid_argument,
    unsupported,
    non_elliptic,
    no_bound_found,
    incompatible_grid,
    too_large,
    peclet_violation,
    no_convergence,
    non_positive_iterate,
    degenerate_lambda,
    boundary_minimum,
    subcritical_speed,
    no_root_bracket,
    not_on_dispersion,
    step_too_large,
    solver_failure,
    zero_unstable_violated,
    front_left_window,
    insufficient_record,
    not_converged,
    insufficient_decay_region,
    inadmissible_perturbation,
    degenerate_series,
    lambda_out_of_band,
    parse_error,
    validation_error,
};

/// CamelCase name used in JSON error reports, e.g. "NonElliptic".
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace pulsewave
