#pragma once

#include <span>

namespace pulsewave::detail {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y ≈ slope x + intercept with the coefficient of
/// determination. Needs at least two distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace pulsewave::detail
