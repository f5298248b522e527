#pragma once

#include <optional>
#include <vector>

#include "pulsewave/spectral.hpp"

namespace pulsewave {

struct DispersionSettings {
    double lambda_lo = 0.05;
    double lambda_hi = 8.0;
    int scan_points = 64;
    double relative_width = 1e-6;  // golden-section stopping width, relative to λ
    bool widen_once = true;        // retry once on a wider range after BoundaryMinimum
    unsigned workers = 1;
    EigenSettings eigen;
    std::optional<double> floquet_dt;  // default T/1024 for time-periodic media
};

/// Sampled dispersion relation and its minimum.
struct DispersionCurve {
    std::vector<double> lambda;
    std::vector<double> mu0;          // μ_0(λ), principal eigenvalue of −L_{0,λ}
    std::vector<double> c_of_lambda;  // −μ_0(λ)/λ
    double c_star = 0.0;
    double lambda_star = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double max_residual = 0.0;  // worst eigen residual over every solve
};

/// Principal eigenvalue of −L_{c,λ} (Floquet version for time-periodic media).
double mu_c(const Medium& medium, const Grid& grid, double lambda, double c,
            const DispersionSettings& settings = {});

/// c(λ) = −μ_0(λ)/λ, the speed at which μ_c(λ) vanishes. DegenerateLambda for λ < 1e-6.
double speed_of_lambda(const Medium& medium, const Grid& grid, double lambda,
                       const DispersionSettings& settings = {});

/// Log-spaced scan of c(λ) then golden-section refinement of the minimizer.
/// BoundaryMinimum if the minimizer sits at an end of the range (after the
/// optional one-time widening).
DispersionCurve minimal_speed(const Medium& medium, const Grid& grid, const DispersionSettings& settings = {});

struct RootPair {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double mu_mid = 0.0;  // μ_c((λ1+λ2)/2) > 0
};

/// λ1(c) < λ2(c), the zeros of μ_c(·) on either side of λ*, by bisection to 1e-8.
/// SubcriticalSpeed if c <= c* + 1e-8; NoRootBracket if μ_c does not change sign.
RootPair lambda_roots(const Medium& medium, const Grid& grid, double c, const DispersionCurve& curve,
                      const DispersionSettings& settings = {});

/// Positive eigenfunction v of −L_{c,λ}, max 1. NotOnDispersion when |μ_c(λ)| > 1e-6.
EigenResult front_eigenfunction(const Medium& medium, const Grid& grid, double c, double lambda,
                                const DispersionSettings& settings = {});

}  // namespace pulsewave
