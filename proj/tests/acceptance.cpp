// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned.
// Exit status 0 iff every criterion passes.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pulsewave/experiments.hpp"
#include "support.hpp"

using namespace pulsewave;
using testing_media::dense_min_real;
using testing_media::fisher;
using testing_media::periodic_a;
using testing_media::periodic_mu;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Shared Fisher state: the c = 2.5 wave feeds criteria 4 and 6, the critical
// wave criteria 4 and 7.
struct Fisher {
    Medium m = fisher();
    Grid cell = Grid::periodic({1.0}, {256});
    std::optional<SteadyState> steady;
    std::optional<DispersionCurve> curve;
    std::optional<WaveRecord> fast, critical;
};
Fisher F;

Outcome minimal_speed_fisher() {
    F.curve = minimal_speed(F.m, F.cell);
    const double ec = rel(F.curve->c_star, 2.0), el = rel(F.curve->lambda_star, 1.0);
    return {ec <= 0.01 && el <= 0.01,
            fmt("c* = %.8f (rel err %.2e <= 1e-2), lambda* = %.8f (rel err %.2e <= 1e-2)", F.curve->c_star, ec,
                F.curve->lambda_star, el)};
}

Outcome root_pair() {
    if (!F.curve) F.curve = minimal_speed(F.m, F.cell);
    const RootPair r = lambda_roots(F.m, F.cell, 2.5, *F.curve);
    const double e1 = std::abs(r.lambda1 - 0.5), e2 = std::abs(r.lambda2 - 2.0);
    return {e1 <= 1e-3 && e2 <= 1e-3,
            fmt("lambda1 = %.9f (err %.1e), lambda2 = %.9f (err %.1e), both <= 1e-3", r.lambda1, e1, r.lambda2, e2)};
}

Outcome periodic_dense_scan() {
    const Medium m = periodic_mu();
    const Grid g = Grid::periodic({1.0}, {128});
    const DispersionCurve dc = minimal_speed(m, g);
    // brute force: dense spectra of the twisted operator on 256 λ points
    double best = std::numeric_limits<double>::infinity(), best_l = 0.0;
    for (int k = 0; k < 256; ++k) {
        const double l = 0.1 + (4.0 - 0.1) * k / 255.0;
        const double mu0 = dense_min_real(export_dense(assemble_twisted(g, m, l, 0.0)));
        const double c = -mu0 / l;
        if (c < best) {
            best = c;
            best_l = l;
        }
    }
    const double e = rel(dc.c_star, best);
    return {e <= 5e-3, fmt("optimizer c* = %.8f, dense scan min = %.8f at lambda = %.4f, rel diff %.2e <= 5e-3",
                           dc.c_star, best, best_l, e)};
}

void ensure_fisher_waves() {
    if (!F.steady) F.steady = steady_state(F.m, F.cell);
    if (!F.curve) F.curve = minimal_speed(F.m, F.cell);
}

Outcome speed_selection() {
    ensure_fisher_waves();
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    F.fast = construct_wave(F.m, *F.steady, 2.5, *F.curve);
    const auto t1 = clock::now();
    F.critical = construct_wave(F.m, *F.steady, F.curve->c_star, *F.curve);
    const double s1 = std::chrono::duration<double>(t1 - t0).count();
    const double s2 = std::chrono::duration<double>(clock::now() - t1).count();
    const double e1 = rel(F.fast->c_meas, 2.5), e2 = rel(F.critical->c_meas, 2.0);
    return {e1 <= 0.02 && e2 <= 0.02 && s1 <= 120.0 && s2 <= 120.0,
            fmt("seed 0.5: c_meas = %.5f (rel err %.2e, %.1f s); seed lambda* = %.5f: c_meas = %.5f (rel err %.2e, "
                "%.1f s); gate 2e-2 and 120 s each",
                F.fast->c_meas, e1, s1, F.critical->lambda, F.critical->c_meas, e2, s2)};
}

Outcome pulsating() {
    const Medium m = periodic_mu();
    const Grid cell = Grid::periodic({1.0}, {256});
    const SteadyState s = steady_state(m, cell);
    const DispersionCurve dc = minimal_speed(m, cell);
    const WaveRecord w = construct_wave(m, s, 1.2 * dc.c_star, dc);
    const double sup_p = *std::max_element(s.p.values.begin(), s.p.values.end());
    const double r = w.pulsating_residual / sup_p;
    return {r <= 1e-2, fmt("c = 1.2 c* = %.5f, c_meas = %.5f, residual = %.3e = %.3e sup p (<= 1e-2), t >= 50",
                           w.c_target, w.c_meas, w.pulsating_residual, r)};
}

Outcome exponential_stability() {
    if (!F.fast) speed_selection();
    const StabilitySeries s = stability_run(F.m, *F.fast, PerturbationSpec{}, 40.0, 0.25, 1.25);
    const auto win = tail_window(s.t, 0.6);
    const RateFit e = fit_exponential(s.t, s.E_global, win.first, win.second);
    const RatePrediction p = rate_prediction(F.m, F.cell, 2.5, 1.25, stability_of_p(F.m, *F.steady), *F.curve);
    return {e.value >= 0.4 && e.r2 >= 0.99,
            fmt("mu_fit = %.4f (>= 0.4), R^2 = %.5f (>= 0.99) on [%.1f, %.1f]; theory floor %.4f", e.value, e.r2,
                win.first, win.second, p.rate)};
}

Outcome algebraic_stability() {
    if (!F.critical) speed_selection();
    const StabilitySeries s = stability_run(F.m, *F.critical, PerturbationSpec{}, 200.0, 0.25, F.curve->lambda_star);
    const RateFit a = fit_algebraic(s.t, s.E_global, 20.0, 200.0);
    const bool dec = decreasing_on(s.t, s.E_global, 20.0, 200.0);
    const bool one_d = a.value <= -0.3 && dec;

    // 2D smoke: separable medium, c = c*, N = 64 per axis
    const Medium m2(DiffusionField::diagonal(PeriodicFunction(1.0), PeriodicFunction(1.0, {{0.2, 0, 1, 0, Phase::cos}})),
                    Nonlinearity::kpp_logistic(PeriodicFunction(1.0)), {4.0, 4.0});
    const Grid cell2 = Grid::periodic({4.0, 4.0}, {64, 64});
    const SteadyState s2 = steady_state(m2, cell2);
    const DispersionCurve c2 = minimal_speed(m2, cell2);
    WaveSettings w;
    w.cells = 64;
    w.window_periods = 24;
    w.transverse_half_width = 12;
    w.fit_far_field = false;
    const WaveRecord wave2 = construct_wave(m2, s2, c2.c_star, c2, w);
    const StabilitySeries t2 = stability_run(m2, wave2, PerturbationSpec{}, 60.0, 0.5, c2.lambda_star);
    const RateFit a2 = fit_algebraic(t2.t, t2.E_global, 10.0, 60.0);
    const bool two_d = a2.value <= -0.6;
    return {one_d && two_d,
            fmt("1D c* = 2: slope = %.4f (<= -0.3, R^2 %.3f), monotone = %s on [20, 200]; 2D smoke c* = %.4f: slope = "
                "%.4f (<= -0.6) on [10, 60]",
                a.value, a.r2, dec ? "yes" : "no", c2.c_star, a2.value)};
}

Outcome comparison() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int pairs = 0, kept = 0;
    for (const Medium& m : {fisher(), periodic_mu()}) {
        const Grid g = Grid::periodic({1.0}, {64});
        const SteadyState st = steady_state(m, g);
        const double top = check_bound_M(m, 4.0);
        const Stepper s(m, g, default_step(m, g, top), top);
        for (int k = 0; k < 100; ++k) {
            Field u{g, std::vector<double>(g.size()), 0.0}, v = u;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double a = unit(rng) * st.p.values[i], b = unit(rng) * st.p.values[i];
                u.values[i] = std::min(a, b);
                v.values[i] = std::max(a, b);
            }
            ++pairs;
            kept += comparison_check(u, v, s, 5.0) ? 1 : 0;
        }
    }
    return {kept == pairs, fmt("%d of %d ordered pairs in [0, p] stay ordered to 1e-12 up to t = 5", kept, pairs)};
}

Outcome floquet() {
    const Grid g = Grid::periodic({1.0}, {32});
    const double dt = 1.0 / 2048;
    const Medium pm(DiffusionField::scalar(PeriodicFunction(1.0)),
                    Nonlinearity::kpp_logistic(PeriodicFunction(1.0, {{0.5, 1, 0, 0, Phase::sin}})), {1.0}, 1.0);
    double worst = 0.0;
    for (double l : {0.0, 0.7, 1.5})
        for (double c : {0.0, 2.5}) {
            const double elliptic = principal_eig(assemble_twisted(g, pm, l, c)).eigenvalue;
            worst = std::max(worst, std::abs(principal_eig_floquet(pm, g, l, c, dt).eigenvalue - elliptic));
        }
    const Medium tm(DiffusionField::scalar(PeriodicFunction(1.0)),
                    Nonlinearity::kpp_logistic(PeriodicFunction(1.0, {{0.3, 0, 0, 1, Phase::sin}})), {1.0}, 1.0);
    const double mu = principal_eig_floquet(tm, g, 0.0, 0.0, dt).growth_exponent;
    const double e = std::abs(mu - 1.0);
    return {worst <= 1e-4 && e <= 1e-4,
            fmt("time-constant: max |floquet - elliptic| = %.2e (<= 1e-4); f_u = 1 + 0.3 sin: mu = %.8f (err %.2e <= 1e-4)",
                worst, mu, e)};
}

Outcome uniqueness() {
    ensure_fisher_waves();
    const UniquenessResult u =
        uniqueness_experiment(F.m, *F.steady, 2.5, *F.curve, SeedSpec{0.0, 1.0}, SeedSpec{1.0, 2.0}, 60.0);
    const double err = std::abs(u.shift - u.expected_shift);
    return {u.distance <= 1e-2 && err <= u.spacing,
            fmt("aligned distance = %.2e (<= 1e-2, unaligned %.2e); shift = %.5f, expected %.5f, |diff| = %.2e <= h = %.2e",
                u.distance, u.unaligned_distance, u.shift, u.expected_shift, err, u.spacing)};
}

Outcome invariants() {
    const Grid g = Grid::periodic({1.0}, {64});
    const Medium m = periodic_mu();
    double eig = 0.0;
    for (double l : {0.0, 0.5, 1.5}) {
        const DiscreteOperator tw = assemble_twisted(g, m, l, 1.0);
        eig = std::max(eig, std::abs(principal_eig(tw).eigenvalue - dense_min_real(export_dense(tw))));
    }
    double affine = 0.0;
    for (double l : {0.3, 1.0, 2.0}) {
        const double a = mu_c(m, g, l, 3.0), b = mu_c(m, g, l, 0.5);
        affine = std::max(affine, std::abs((a - b) - l * (3.0 - 0.5)));
    }
    const Medium ma = periodic_a();
    const Eigen::MatrixXd d = export_dense(assemble_divergence(g, ma));
    const double rows = d.rowwise().sum().cwiseAbs().maxCoeff();
    const double sym = (d - d.transpose()).cwiseAbs().maxCoeff();
    const SteadyState s = steady_state(m, Grid::periodic({1.0}, {256}));
    const bool ok = eig <= 1e-8 && affine <= 1e-10 && rows <= 1e-12 && sym <= 1e-12 && s.residual <= 1e-8;
    return {ok, fmt("eigen vs dense %.1e (<= 1e-8), affinity %.1e (<= 1e-10), row sums %.1e and asymmetry %.1e "
                    "(<= 1e-12), steady residual %.1e (<= 1e-8)",
                    eig, affine, rows, sym, s.residual)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "minimal speed, homogeneous Fisher", 10, minimal_speed_fisher},
        {2, "root pair at c = 2.5", 5, root_pair},
        {3, "periodic medium c* vs dense lambda scan", 60, periodic_dense_scan},
        {4, "front speed selection", 240, speed_selection},
        {5, "pulsating property", 180, pulsating},
        {6, "exponential stability", 120, exponential_stability},
        {7, "algebraic stability", 600, algebraic_stability},
        {8, "comparison principle", 60, comparison},
        {9, "Floquet degeneracy", 30, floquet},
        {10, "uniqueness up to translation", 180, uniqueness},
        {11, "invariant suites", 120, invariants},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s %2d %s: %s [%.1f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, c.budget, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
