#include "doctest.h"

#include <cmath>

#include "pulsewave/errors.hpp"
#include "pulsewave/experiments.hpp"
#include "support.hpp"

using namespace pulsewave;
using testing_media::fisher;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::validation_error;
}

struct FisherSetup {
    Grid cell = Grid::periodic({1.0}, {64});
    Medium m = fisher();
    SteadyState s = steady_state(m, cell);
    DispersionCurve curve = minimal_speed(m, cell);
    WaveRecord wave;
    FisherSetup() {
        WaveSettings ws;
        ws.cells = 64;
        ws.t_end = 30.0;
        ws.pulsating_from = 20.0;
        wave = construct_wave(m, s, 2.5, curve, ws);
    }
};

const FisherSetup& fisher_setup() {
    static const FisherSetup setup;
    return setup;
}

std::vector<double> times(int n, double dt) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = dt * i;
    return t;
}

}  // namespace

TEST_CASE("synthetic decay series") {
    const std::vector<double> t = times(201, 0.25);
    std::vector<double> ex(t.size()), al(t.size()), al5(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        ex[i] = 3.0 * std::exp(-0.5 * t[i]);
        al[i] = 1.0 / std::sqrt(1.0 + t[i]);
        al5[i] = 5.0 * al[i];
    }
    const RateFit e = fit_exponential(t, ex, 10.0, 50.0);
    CHECK(std::abs(e.value - 0.5) <= 1e-8);
    CHECK(e.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_exponential(t, al, 0.0, 50.0).r2 < 0.995);
    CHECK(std::abs(fit_algebraic(t, al5, 10.0, 50.0).value + 0.5) <= 1e-8);

    const auto win = tail_window(t);
    CHECK(win.first == doctest::Approx(20.0));
    CHECK(win.second == doctest::Approx(50.0));
    CHECK(decreasing_on(t, ex, 0.0, 50.0));
    std::vector<double> flat = ex;
    flat[100] = flat[99];
    CHECK_FALSE(decreasing_on(t, flat, 0.0, 50.0));

    std::vector<double> floor = ex;
    floor[150] = 0.0;
    CHECK(kind_of([&] { fit_exponential(t, floor, 10.0, 50.0); }) == ErrorKind::degenerate_series);
    CHECK(kind_of([&] { fit_algebraic(t, al5, 5.0, 50.0); }) == ErrorKind::invalid_argument);

    std::vector<double> bound(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) bound[i] = 2.0 * std::exp(-0.3 * t[i]) / std::sqrt(1.0 + t[i]);
    const BoundFit b = upper_bound_fit(t, bound, 0.3, 1, 10.0, 50.0);
    CHECK(b.C == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.excursion <= 1e-12);
}

TEST_CASE("rate prediction, homogeneous Fisher") {
    const Grid cell = Grid::periodic({1.0}, {64});
    const Medium m = fisher();
    const DispersionCurve curve = minimal_speed(m, cell);
    const RatePrediction p = rate_prediction(m, cell, 2.5, 1.25, -1.0, curve);
    CHECK(p.mu_c == doctest::Approx(0.5625).epsilon(1e-9));
    CHECK(p.rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.best_rate == doctest::Approx(0.5).epsilon(1e-9));

    const RootPair roots = lambda_roots(m, cell, 2.5, curve);
    CHECK(std::abs(rate_prediction(m, cell, 2.5, roots.lambda1, -1.0, curve).rate) <= 1e-6);
    CHECK(std::abs(rate_prediction(m, cell, curve.c_star, curve.lambda_star, -1.0, curve).rate) <= 1e-6);
    CHECK(kind_of([&] { rate_prediction(m, cell, 2.5, 3.0, -1.0, curve); }) == ErrorKind::lambda_out_of_band);
    CHECK(kind_of([&] { rate_prediction(m, cell, 2.5, 0.2, -1.0, curve); }) == ErrorKind::lambda_out_of_band);
}

TEST_CASE("zero perturbation gives a zero error series") {
    const FisherSetup& f = fisher_setup();
    PerturbationSpec none;
    none.amplitude = 0.0;
    const StabilitySeries s = stability_run(f.m, f.wave, none, 4.0, 0.25, 1.25);
    CHECK(s.t.size() == 17);
    for (double e : s.E_global) CHECK(e == 0.0);
    CHECK(s.clamped == 0);
    CHECK(s.l1_certificate == 0.0);
}

TEST_CASE("positive bump: ordering, regions and exponential decay") {
    const FisherSetup& f = fisher_setup();
    const StabilitySeries s = stability_run(f.m, f.wave, PerturbationSpec{}, 40.0, 0.25, 1.25);
    CHECK(s.min_gap >= -1e-12);
    CHECK(s.l1_certificate > 0.0);
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        CHECK(s.E_global[i] == std::max(s.E_left[i], s.E_right[i]));
        CHECK(s.E_global[i] >= 0.0);
    }
    CHECK(decreasing_on(s.t, s.E_global, 5.0, 40.0));
    const auto win = tail_window(s.t);
    const RateFit e = fit_exponential(s.t, s.E_global, win.first, win.second);
    CHECK(e.value >= 0.4);
    CHECK(e.r2 >= 0.99);
    const RateFit a = fit_algebraic(s.t, s.E_global, std::max(10.0, win.first), win.second);
    CHECK(a.value < -1.0);
    CHECK(a.r2 < e.r2);
}

TEST_CASE("perturbation admissibility and clamping") {
    const FisherSetup& f = fisher_setup();
    PerturbationSpec tail;
    tail.kind = PerturbationKind::weighted_tail;
    tail.rate = 1.0;
    CHECK(kind_of([&] { stability_run(f.m, f.wave, tail, 1.0, 0.25, 1.25); }) ==
          ErrorKind::inadmissible_perturbation);
    tail.rate = 2.0;
    CHECK(stability_run(f.m, f.wave, tail, 1.0, 0.25, 1.25).l1_certificate > 0.0);

    PerturbationSpec big;
    big.amplitude = -2.0;
    CHECK(kind_of([&] { perturbed_profile(f.wave, big); }) == ErrorKind::invalid_argument);
    big.amplitude = 2.0;
    big.sign = PerturbationSign::negative;
    big.offset = 3.0;
    std::size_t clamped = 0;
    const Field q = perturbed_profile(f.wave, big, &clamped);
    CHECK(clamped > 0);
    for (std::size_t i = 0; i < q.values.size(); ++i) {
        CHECK(q.values[i] >= 0.0);
        CHECK(q.values[i] <= f.wave.p_cell[q.grid.phase_index(i)]);
    }
}

TEST_CASE("mixed-sign perturbations are reproducible from the seed") {
    const FisherSetup& f = fisher_setup();
    PerturbationSpec mixed;
    mixed.sign = PerturbationSign::mixed;
    mixed.seed = 42;
    const StabilitySeries a = stability_run(f.m, f.wave, mixed, 2.0, 0.25, 1.25);
    const StabilitySeries b = stability_run(f.m, f.wave, mixed, 2.0, 0.25, 1.25);
    CHECK(a.E_global == b.E_global);
    mixed.seed = 43;
    const StabilitySeries c = stability_run(f.m, f.wave, mixed, 2.0, 0.25, 1.25);
    CHECK(a.E_global != c.E_global);
}
