#pragma once

#include <optional>
#include <vector>

#include "pulsewave/dispersion.hpp"
#include "pulsewave/evolution.hpp"

namespace pulsewave {

struct SteadyState {
    Field p;                        // on the periodic cell grid
    double residual = 0.0;          // sup |∇·(A∇p) + f(x, p)| (discrete)
    double uniqueness_witness = 0.0;  // sup distance of the limits from below and above
    double mu1 = 0.0;               // principal eigenvalue at u = 0 (> 0)
};

struct SteadySettings {
    double tolerance = 1e-10;  // successive-step difference that ends time stepping
    double max_time = 2000.0;
    double bound_ceiling = 1e3;  // search ceiling for M
};

/// Positive periodic steady state, reached by time stepping from below
/// (0.1 max μ, or 0.1 M for tables) and from above (M), then polished by
/// Newton's method on the discrete equation. Throws ZeroUnstableViolated when
/// μ1 <= 0, NoConvergence when the two limits differ by 1e-8 or more.
SteadyState steady_state(const Medium& medium, const Grid& cell, const SteadySettings& settings = {});

/// μ̄1: principal eigenvalue of ∇·(A∇) + f_u(x, p(x)).
double stability_of_p(const Medium& medium, const SteadyState& steady);

struct WaveSettings {
    int cells = 256;             // nodes per period along x1
    double window_periods = 40;  // window width in periods
    double front_at = 0.75;      // initial front position, fraction of the window from its left edge
    double trigger = 0.625;      // recentering trigger, fraction of the window
    std::optional<double> dt;    // default min(budget, h)
    double t_end = 60.0;
    double record_dt = 0.125;
    double level = 0.5;
    double pulsating_from = 50.0;  // residual over t >= this
    double eps_fraction = 0.05;    // ε̄ = eps_fraction · min p
    /// Transverse axis for two-dimensional media: zero-flux window [-w, w].
    double transverse_half_width = 20.0;
    /// Off for windows too short to hold 8 periods of decay region; the
    /// record's fit then stays empty.
    bool fit_far_field = true;
    DispersionSettings dispersion;
};

/// Front seed u0 = min(p, e^{λ(x1 − x_c)} v(x)) on a decay-tail window grid.
struct FrontSeed {
    Field u0;
    double lambda = 0.0;
    std::vector<double> v;       // front eigenfunction on the periodicity cell
    std::vector<double> p_cell;  // steady state on the periodicity cell
};

/// λ = λ1(c) for c > c*, λ* for c = c* (within 1e-8). Throws SubcriticalSpeed
/// below c*. The window puts x1 = 0 at `settings.front_at` of its width; the
/// seed is min(p, B e^{λ(x1 − shift)} v) with B = amplitude.
FrontSeed build_front_initial(const Medium& medium, const SteadyState& steady, double c,
                              const DispersionCurve& curve, const WaveSettings& settings = {},
                              double amplitude = 1.0, double shift = 0.0);

struct SpeedMeasurement {
    double c_meas = 0.0;
    std::vector<double> t;
    std::vector<double> X;
};

/// X(t): leftmost crossing of θ p(x) (first line in 2D); c_meas = −slope of the
/// least-squares line through the last half of the record. Throws
/// FrontLeftWindow when X comes within 5 periods of either edge, and
/// InsufficientRecord for fewer than 4 frames.
SpeedMeasurement measure_speed(const Trajectory& trajectory, const std::vector<double>& p_cell, double level = 0.5);

/// sup over frames with t >= t_from and x of |u(t + L/c, x) − u(t, x + L)|
/// (the front moves towards −x1),
/// u(t + L/c) by cubic interpolation in time. Nodes within two periods of a
/// window edge are skipped. Throws InsufficientRecord if no frame qualifies.
double verify_pulsating(const Trajectory& trajectory, double c, double t_from = 0.0);

/// W(ξ) = e^{−λ(ξ − ξ0)} for ξ <= ξ0, 1 otherwise.
struct WeightFunction {
    double lambda = 0.0;
    double xi0 = 0.0;
    double operator()(double xi) const;
};

/// ξ0 of a snapshot (ξ = x1 + c t): smallest ξ such that every node further
/// right is within ε̄ of p. Throws NotConverged if no such node exists.
double xi0_of(const Field& snapshot, const std::vector<double>& p_cell, double c, double eps);

struct AsymptoticFit {
    double B = 0.0;
    double lambda_fit = 0.0;
    std::size_t points = 0;
    bool critical = false;
};

/// Least-squares fit of ln(w/v) against ξ (c > c*) or ln(w/(|ξ − ξ_f| v)) with
/// ξ_f the front position (c = c*) over nodes with 1e-6 < w < 1e-2 min p.
/// Throws InsufficientDecayRegion when that region spans fewer than 8 periods.
AsymptoticFit asymptotic_fit(const Field& snapshot, const std::vector<double>& v_cell,
                             const std::vector<double>& p_cell, double c, bool critical, double level = 0.5);

struct WaveRecord {
    double c_target = 0.0;
    double c_star = 0.0;
    double lambda = 0.0;  // seed decay rate
    bool critical = false;
    double c_meas = 0.0;
    double pulsating_residual = 0.0;
    double xi0 = 0.0;
    double eps = 0.0;
    std::optional<AsymptoticFit> fit;
    std::vector<double> t;
    std::vector<double> X;
    Trajectory trajectory;
    Field profile;  // last frame
    std::vector<double> v_cell;
    std::vector<double> p_cell;
    double dt = 0.0;
    double u_max = 0.0;
    RecenterPolicy policy;  // the window policy used for the run
};

/// Seeds with the dispersion decay rate, evolves with recentering, and measures
/// speed, pulsating residual, ξ0 and the far-field fit. Autonomous media only.
WaveRecord construct_wave(const Medium& medium, const SteadyState& steady, double c, const DispersionCurve& curve,
                          const WaveSettings& settings = {});

/// Recentering policy used for front runs built from a seed.
RecenterPolicy front_policy(const Field& seed, const std::vector<double>& p_cell, double lambda,
                            const WaveSettings& settings);

struct SeedSpec {
    double shift = 0.0;      // translation of the seed along x1
    double amplitude = 1.0;  // B
};

struct UniquenessResult {
    double shift = 0.0;            // s with u2(t, x) ≈ u1(t, x − s)
    double expected_shift = 0.0;   // from the seed shifts and amplitude ratio
    double distance = 0.0;         // aligned sup distance
    double unaligned_distance = 0.0;
    double spacing = 0.0;
    double t_end = 0.0;
    double c_meas = 0.0;  // discrete front speed of the first run
};

/// Evolves two admissible seeds with identical steps and aligns them by a
/// shift in ξ, realized as a time offset s/c_meas of the second run (cubic
/// interpolation between frames), minimized by golden section. c_meas comes
/// from the front positions of the first run over the second half.
UniquenessResult uniqueness_experiment(const Medium& medium, const SteadyState& steady, double c,
                                       const DispersionCurve& curve, const SeedSpec& first, const SeedSpec& second,
                                       double t_end, const WaveSettings& settings = {});

/// Values of a trajectory at time t on global axis-0 node indices
/// [g_lo, g_hi] (all transverse lines), cubic in time between frames.
std::vector<double> sample_trajectory(const Trajectory& trajectory, double t, long g_lo, long g_hi);

}  // namespace pulsewave
