#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pulsewave/waves.hpp"

namespace pulsewave {

enum class PerturbationKind { compact_bump, weighted_tail };
enum class PerturbationSign { positive, negative, mixed };

struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::compact_bump;
    double amplitude = 0.1;
    double width = 2.0;  // half-width of the bump support along x1
    double rate = 0.0;   // tail: δ ~ e^{rate (x1 − X)} ahead of the front
    PerturbationSign sign = PerturbationSign::positive;
    std::uint64_t seed = 1;  // mixed signs draw per-node values from this seed
    /// Bump center relative to the front position X. Negative values sit
    /// ahead of the front (it moves towards −x1).
    double offset = -5.0;
};

/// Twin-run error series. t is the time elapsed since the perturbation.
struct StabilitySeries {
    std::vector<double> t;
    std::vector<double> E_left;    // ξ <= ξ0
    std::vector<double> E_right;   // ξ > ξ0
    std::vector<double> E_global;  // max of the two
    double min_gap = 0.0;          // min over t, x of q − r
    std::size_t clamped = 0;       // nodes clamped into [0, p] at t = 0
    double l1_certificate = 0.0;   // Σ W |δ| h
    double weight_lambda = 0.0;
    double xi0 = 0.0;
    double t0 = 0.0;  // absolute time of the perturbation
};

/// Initial perturbed data q0 = clamp(profile + δ, 0, p) for a wave record,
/// with the number of clamped nodes.
Field perturbed_profile(const WaveRecord& wave, const PerturbationSpec& pert, std::size_t* clamped = nullptr);

/// Evolves the wave profile r and the perturbed data q with identical steps
/// and records sup |q − r| on either side of the moving line ξ = x1 + c_meas t = ξ0.
/// The weight W of (λ, ξ0) must make W·δ summable: a weighted tail needs
/// rate > λ. Default λ: midpoint of [λ1(c), λ2(c)] (λ* at c = c*).
/// Throws InadmissiblePerturbation.
StabilitySeries stability_run(const Medium& medium, const WaveRecord& wave, const PerturbationSpec& pert,
                              double t_end, double record_dt, double weight_lambda);

struct RateFit {
    double value = 0.0;  // μ_fit (exponential) or slope (algebraic)
    double r2 = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t points = 0;
};

/// Slope of −ln E against t over [t_lo, t_hi]. Throws DegenerateSeries when
/// E <= 1e-14 inside the window.
RateFit fit_exponential(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi);

/// Slope of ln E against ln(1 + t) over [t_lo, t_hi], t_lo >= 10.
RateFit fit_algebraic(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi);

/// Last `fraction` of the recorded span.
std::pair<double, double> tail_window(const std::vector<double>& t, double fraction = 0.6);

/// True iff E is strictly decreasing over the samples in [t_lo, t_hi].
bool decreasing_on(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi);

struct RatePrediction {
    double rate = 0.0;        // min{μ_c(λ), −μ̄1/2}
    double mu_c = 0.0;
    double half_mubar = 0.0;  // −μ̄1/2
    double best_rate = 0.0;   // max over a λ grid in [λ1, λ2]
    double best_lambda = 0.0;
};

/// Throws LambdaOutOfBand unless λ1(c) <= λ <= λ2(c) (λ = λ* at c = c*).
RatePrediction rate_prediction(const Medium& medium, const Grid& cell, double c, double lambda, double mubar1,
                               const DispersionCurve& curve, const DispersionSettings& settings = {});

/// Constant of the upper bound E(t) <= C (1+t)^{−n/2} e^{−rate t} on a window:
/// C = max g, excursion = (max g − min g)/max g with g = E (1+t)^{n/2} e^{rate t}.
struct BoundFit {
    double C = 0.0;
    double excursion = 0.0;
};
BoundFit upper_bound_fit(const std::vector<double>& t, const std::vector<double>& E, double rate, int n,
                         double t_lo, double t_hi);

}  // namespace pulsewave
