#include "pulsewave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "pulsewave/detail/line_fit.hpp"
#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

double cos2_bump(double d, double width) {
    if (std::abs(d) >= width) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * d / width);
    return c * c;
}

double cell_volume(const Grid& g) {
    double v = g.axis(0).spacing();
    if (g.dimension() == 2) v *= g.axis(1).spacing();
    return v;
}

std::vector<double> perturbation(const WaveRecord& wave, const PerturbationSpec& pert, double X) {
    const Grid& g = wave.profile.grid;
    std::vector<double> d(g.size(), 0.0);
    std::mt19937_64 rng(pert.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point x = g.coordinate(i);
        double shape = 0.0;
        if (pert.kind == PerturbationKind::compact_bump) {
            shape = cos2_bump(x[0] - (X + pert.offset), pert.width);
            if (g.dimension() == 2) shape *= cos2_bump(x[1], pert.width);
        } else if (x[0] <= X) {
            shape = std::exp(pert.rate * (x[0] - X));
        }
        double s = 1.0;
        if (pert.sign == PerturbationSign::negative) s = -1.0;
        if (pert.sign == PerturbationSign::mixed) s = unit(rng);
        d[i] = pert.amplitude * s * shape;
    }
    return d;
}

double front_of(const WaveRecord& wave) {
    const auto X = front_position(wave.profile, wave.p_cell, 0.5);
    if (!X) fail(ErrorKind::not_converged, "wave profile has no front");
    return *X;
}

std::vector<std::size_t> window_indices(const std::vector<double>& t, double t_lo, double t_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_lo - 1e-12 && t[i] <= t_hi + 1e-12) idx.push_back(i);
    return idx;
}

RateFit fit(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi, bool algebraic) {
    if (t.size() != E.size()) fail(ErrorKind::invalid_argument, "time and error series differ in length");
    const auto idx = window_indices(t, t_lo, t_hi);
    if (idx.size() < 3) fail(ErrorKind::insufficient_record, "fit window holds fewer than 3 samples");
    std::vector<double> xs, ys;
    for (std::size_t i : idx) {
        if (!(E[i] > 1e-14)) {
            std::ostringstream msg;
            msg << "E(" << t[i] << ") = " << E[i] << " is at the floating-point floor";
            fail(ErrorKind::degenerate_series, msg.str());
        }
        xs.push_back(algebraic ? std::log1p(t[i]) : t[i]);
        ys.push_back(std::log(E[i]));
    }
    const detail::LineFit lf = detail::fit_line(xs, ys);
    RateFit out;
    out.value = algebraic ? lf.slope : -lf.slope;
    out.r2 = lf.r2;
    out.t_lo = t[idx.front()];
    out.t_hi = t[idx.back()];
    out.points = lf.points;
    return out;
}

}  // namespace

Field perturbed_profile(const WaveRecord& wave, const PerturbationSpec& pert, std::size_t* clamped) {
    if (!(pert.amplitude >= 0.0)) fail(ErrorKind::invalid_argument, "perturbation amplitude must be >= 0");
    if (pert.kind == PerturbationKind::compact_bump && !(pert.width > 0.0))
        fail(ErrorKind::invalid_argument, "bump width must be positive");
    const std::vector<double> d = perturbation(wave, pert, front_of(wave));
    Field q = wave.profile;
    std::size_t count = 0;
    for (std::size_t i = 0; i < q.values.size(); ++i) {
        const double top = wave.p_cell[q.grid.phase_index(i)];
        const double v = q.values[i] + d[i];
        const double c = std::clamp(v, 0.0, top);
        if (c != v) ++count;
        q.values[i] = c;
    }
    if (clamped) *clamped = count;
    return q;
}

StabilitySeries stability_run(const Medium& medium, const WaveRecord& wave, const PerturbationSpec& pert,
                              double t_end, double record_dt, double weight_lambda) {
    if (!(weight_lambda > 0.0)) fail(ErrorKind::invalid_argument, "weight rate must be positive");
    if (!(t_end > 0.0) || !(record_dt > 0.0)) fail(ErrorKind::invalid_argument, "t_end and record_dt must be positive");
    StabilitySeries out;
    out.weight_lambda = weight_lambda;
    out.xi0 = wave.xi0;
    out.t0 = wave.profile.t;

    // discrete L1 certificate of W·δ
    if (pert.kind == PerturbationKind::weighted_tail && !(pert.rate > weight_lambda)) {
        std::ostringstream msg;
        msg << "tail rate " << pert.rate << " does not exceed the weight rate " << weight_lambda
            << "; W*delta is not summable";
        fail(ErrorKind::inadmissible_perturbation, msg.str());
    }
    Field q = perturbed_profile(wave, pert, &out.clamped);
    const Field& r = wave.profile;
    const WeightFunction W{weight_lambda, wave.xi0};
    const double vol = cell_volume(r.grid);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double xi = r.grid.coordinate(i)[0] + wave.c_meas * r.t;
        out.l1_certificate += W(xi) * std::abs(q.values[i] - r.values[i]) * vol;
    }
    if (!std::isfinite(out.l1_certificate))
        fail(ErrorKind::inadmissible_perturbation, "weighted L1 norm of the perturbation is not finite");

    const Stepper stepper(medium, r.grid, wave.dt, wave.u_max);
    const long every = std::max(1L, std::lround(record_dt / wave.dt));
    const long chunks = std::max(1L, std::lround(t_end / (static_cast<double>(every) * wave.dt)));
    std::vector<Field> members{r, q};
    out.min_gap = std::numeric_limits<double>::infinity();

    auto record = [&](const Field& a, const Field& b) {
        double left = 0.0, right = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            const double diff = b.values[i] - a.values[i];
            out.min_gap = std::min(out.min_gap, diff);
            const double xi = a.grid.coordinate(i)[0] + wave.c_meas * a.t;
            if (xi <= wave.xi0)
                left = std::max(left, std::abs(diff));
            else
                right = std::max(right, std::abs(diff));
        }
        out.t.push_back(a.t - out.t0);
        out.E_left.push_back(left);
        out.E_right.push_back(right);
        out.E_global.push_back(std::max(left, right));
    };
    record(members[0], members[1]);
    for (long k = 0; k < chunks; ++k) {
        EvolveOptions opts;
        // chunk end as a step count from t0 keeps the record times on the step lattice
        opts.t_end = out.t0 + static_cast<double>((k + 1) * every) * wave.dt;
        opts.record_times = {opts.t_end};
        opts.recenter = wave.policy;
        auto runs = evolve_ensemble(members, stepper, opts);
        members = {runs[0].frames.back(), runs[1].frames.back()};
        record(members[0], members[1]);
    }
    return out;
}

RateFit fit_exponential(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi) {
    return fit(t, E, t_lo, t_hi, false);
}

RateFit fit_algebraic(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi) {
    if (t_lo < 10.0) fail(ErrorKind::invalid_argument, "algebraic fit windows start at t >= 10");
    return fit(t, E, t_lo, t_hi, true);
}

std::pair<double, double> tail_window(const std::vector<double>& t, double fraction) {
    if (t.empty()) fail(ErrorKind::insufficient_record, "empty series");
    const double span = t.back() - t.front();
    return {t.back() - fraction * span, t.back()};
}

bool decreasing_on(const std::vector<double>& t, const std::vector<double>& E, double t_lo, double t_hi) {
    const auto idx = window_indices(t, t_lo, t_hi);
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (!(E[idx[k]] < E[idx[k - 1]])) return false;
    return true;
}

RatePrediction rate_prediction(const Medium& medium, const Grid& cell, double c, double lambda, double mubar1,
                               const DispersionCurve& curve, const DispersionSettings& settings) {
    double lo = curve.lambda_star, hi = curve.lambda_star;
    if (c > curve.c_star + 1e-8) {
        const RootPair roots = lambda_roots(medium, cell, c, curve, settings);
        lo = roots.lambda1;
        hi = roots.lambda2;
    } else if (c < curve.c_star - 1e-8) {
        fail(ErrorKind::subcritical_speed, "no admissible weight below c*");
    }
    const double slack = 1e-6 * std::max(1.0, hi);
    if (lambda < lo - slack || lambda > hi + slack) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " outside [" << lo << ", " << hi << "]";
        fail(ErrorKind::lambda_out_of_band, msg.str());
    }
    RatePrediction out;
    out.half_mubar = -0.5 * mubar1;
    out.mu_c = mu_c(medium, cell, lambda, c, settings);
    out.rate = std::min(out.mu_c, out.half_mubar);
    out.best_rate = -std::numeric_limits<double>::infinity();
    const int points = hi > lo ? 65 : 1;
    for (int k = 0; k < points; ++k) {
        const double l = points == 1 ? lo : lo + (hi - lo) * k / (points - 1);
        const double r = std::min(mu_c(medium, cell, l, c, settings), out.half_mubar);
        if (r > out.best_rate) {
            out.best_rate = r;
            out.best_lambda = l;
        }
    }
    return out;
}

BoundFit upper_bound_fit(const std::vector<double>& t, const std::vector<double>& E, double rate, int n,
                         double t_lo, double t_hi) {
    const auto idx = window_indices(t, t_lo, t_hi);
    if (idx.empty()) fail(ErrorKind::insufficient_record, "empty bound window");
    double g_max = 0.0, g_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : idx) {
        const double g = E[i] * std::pow(1.0 + t[i], 0.5 * n) * std::exp(rate * t[i]);
        g_max = std::max(g_max, g);
        g_min = std::min(g_min, g);
    }
    BoundFit out;
    out.C = g_max;
    out.excursion = g_max > 0.0 ? (g_max - g_min) / g_max : 0.0;
    return out;
}

}  // namespace pulsewave
