#include "pulsewave/waves.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pulsewave/detail/line_fit.hpp"
#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

void require_autonomous(const Medium& medium) {
    if (medium.time_dependent())
        fail(ErrorKind::unsupported, "fronts are constructed for time-independent media only");
}

std::vector<double> reaction_slopes(const Medium& medium, const Grid& cell, const std::vector<double>& u) {
    std::vector<double> d(cell.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = medium.f_u(cell.coordinate(i), u[i]);
    return d;
}

double sup_residual(const Medium& medium, const DiscreteOperator& div, const std::vector<double>& u,
                    std::vector<double>* out = nullptr) {
    std::vector<double> r = div.apply(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += medium.f(div.grid().coordinate(i), u[i]);
        worst = std::max(worst, std::abs(r[i]));
    }
    if (out) *out = std::move(r);
    return worst;
}

// Newton iterations on D u + f(x, u) = 0 started from a converged time-stepping limit.
void newton_polish(const Medium& medium, const DiscreteOperator& div, std::vector<double>& u) {
    const auto n = static_cast<Eigen::Index>(u.size());
    std::vector<double> r;
    double res = sup_residual(medium, div, u, &r);
    for (int it = 0; it < 8 && res > 1e-13; ++it) {
        const DiscreteOperator jac = div.plus_diagonal(reaction_slopes(medium, div.grid(), u));
        Eigen::SparseLU<ColMatrix> lu;
        lu.compute(ColMatrix(jac.matrix()));
        if (lu.info() != Eigen::Success) return;
        Eigen::VectorXd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) rhs[i] = -r[static_cast<std::size_t>(i)];
        const Eigen::VectorXd delta = lu.solve(rhs);
        std::vector<double> trial = u;
        for (Eigen::Index i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] += delta[i];
        std::vector<double> r_trial;
        const double res_trial = sup_residual(medium, div, trial, &r_trial);
        if (!(res_trial < res)) return;
        u = std::move(trial);
        r = std::move(r_trial);
        res = res_trial;
    }
}

std::vector<double> settle(const Medium& medium, const Grid& cell, double start, double u_max,
                           const SteadySettings& s) {
    const double dt = default_step(medium, cell, u_max);
    const Stepper stepper(medium, cell, dt, u_max);
    Field u{cell, std::vector<double>(cell.size(), start), 0.0};
    const auto max_steps = static_cast<long>(std::ceil(s.max_time / dt));
    for (long k = 0; k < max_steps; ++k) {
        const std::vector<double> before = u.values;
        stepper.step(u);
        double diff = 0.0;
        for (std::size_t i = 0; i < before.size(); ++i) diff = std::max(diff, std::abs(u.values[i] - before[i]));
        if (diff < s.tolerance) return u.values;
    }
    fail(ErrorKind::no_convergence, "steady state: time stepping did not settle");
}

long axis0_first(const Field& f) { return f.grid.axis(0).first; }
long axis0_end(const Field& f) { return f.grid.axis(0).first + f.grid.count(0); }  // exclusive

long lines_of(const Grid& g) { return g.dimension() == 2 ? g.count(1) : 1; }

// Frames j0..j0+3 (clamped) around time t for cubic interpolation.
std::pair<std::size_t, std::size_t> stencil(const Trajectory& tr, double t) {
    const auto& fr = tr.frames;
    if (fr.empty() || t < fr.front().t - 1e-9 || t > fr.back().t + 1e-9)
        fail(ErrorKind::insufficient_record, "requested time outside the recorded span");
    std::size_t j = 0;
    while (j + 1 < fr.size() && fr[j + 1].t <= t) ++j;
    if (std::abs(fr[j].t - t) <= 1e-12) return {j, j};
    const std::size_t n = fr.size();
    if (n < 4) return {j, std::min(j + 1, n - 1)};
    std::size_t lo = j == 0 ? 0 : j - 1;
    if (lo + 3 >= n) lo = n - 4;
    return {lo, lo + 3};
}

std::pair<long, long> covered(const Trajectory& tr, std::pair<std::size_t, std::size_t> js) {
    long lo = std::numeric_limits<long>::min();
    long hi = std::numeric_limits<long>::max();
    for (std::size_t j = js.first; j <= js.second; ++j) {
        lo = std::max(lo, axis0_first(tr.frames[j]));
        hi = std::min(hi, axis0_end(tr.frames[j]) - 1);
    }
    return {lo, hi};
}

double value_at(const Field& f, long g, long i1) {
    return f.values[f.grid.index(g - axis0_first(f), i1)];
}

}  // namespace

SteadyState steady_state(const Medium& medium, const Grid& cell, const SteadySettings& settings) {
    require_autonomous(medium);
    if (!cell.is_periodic()) fail(ErrorKind::incompatible_grid, "the steady state lives on the periodic cell");
    const DiscreteOperator div = assemble_divergence(cell, medium);

    SteadyState out;
    out.mu1 = principal_eig(div.plus_diagonal(reaction_slopes(medium, cell, std::vector<double>(cell.size(), 0.0))))
                  .eigenvalue;
    if (!(out.mu1 > 0.0)) {
        std::ostringstream msg;
        msg << "zero state is not linearly unstable (mu1 = " << out.mu1 << ")";
        fail(ErrorKind::zero_unstable_violated, msg.str());
    }
    const double top = check_bound_M(medium, settings.bound_ceiling);
    double low = 0.1 * top;
    if (medium.reaction().kind() == Nonlinearity::Kind::kpp_logistic) {
        double mu_max = 0.0;
        for (std::size_t i = 0; i < cell.size(); ++i) mu_max = std::max(mu_max, medium.f_u(cell.coordinate(i), 0.0));
        low = 0.1 * mu_max;
    }
    std::vector<double> from_below = settle(medium, cell, low, top, settings);
    std::vector<double> from_above = settle(medium, cell, top, top, settings);
    newton_polish(medium, div, from_below);
    newton_polish(medium, div, from_above);

    for (std::size_t i = 0; i < from_below.size(); ++i)
        out.uniqueness_witness = std::max(out.uniqueness_witness, std::abs(from_below[i] - from_above[i]));
    if (!(out.uniqueness_witness < 1e-8)) {
        std::ostringstream msg;
        msg << "limits from below and above differ by " << out.uniqueness_witness;
        fail(ErrorKind::no_convergence, msg.str());
    }
    out.residual = sup_residual(medium, div, from_below);
    out.p = Field{cell, std::move(from_below), 0.0};
    if (!(*std::min_element(out.p.values.begin(), out.p.values.end()) > 0.0))
        fail(ErrorKind::no_convergence, "steady state is not positive");
    return out;
}

double stability_of_p(const Medium& medium, const SteadyState& steady) {
    const Grid& cell = steady.p.grid;
    return principal_eig(assemble_divergence(cell, medium).plus_diagonal(reaction_slopes(medium, cell, steady.p.values)))
        .eigenvalue;
}

FrontSeed build_front_initial(const Medium& medium, const SteadyState& steady, double c, const DispersionCurve& curve,
                              const WaveSettings& settings, double amplitude, double shift) {
    require_autonomous(medium);
    if (!(amplitude > 0.0)) fail(ErrorKind::invalid_argument, "seed amplitude must be positive");
    const Grid& cell = steady.p.grid;
    const Axis& a0 = cell.axis(0);
    if (settings.cells != a0.cells)
        fail(ErrorKind::incompatible_grid, "steady state and wave settings use different resolutions");

    FrontSeed seed;
    const double tol = 1e-8 * std::max(1.0, curve.c_star);
    if (c < curve.c_star - tol) {
        std::ostringstream msg;
        msg << "no front at speed " << c << " below c* = " << curve.c_star;
        fail(ErrorKind::subcritical_speed, msg.str());
    }
    seed.lambda = c <= curve.c_star + tol ? curve.lambda_star
                                          : lambda_roots(medium, cell, c, curve, settings.dispersion).lambda1;
    seed.v = front_eigenfunction(medium, cell, std::max(c, curve.c_star), seed.lambda, settings.dispersion).eigenfunction;
    seed.p_cell = steady.p.values;

    const double L = a0.period;
    const long periods = std::lround(settings.window_periods);
    const long left = std::lround(settings.front_at * settings.window_periods);
    Grid grid = Grid::line(L, a0.cells, -static_cast<double>(left) * L, static_cast<double>(periods - left) * L);
    if (cell.dimension() == 2) {
        const Axis& a1 = cell.axis(1);
        const int n1 = a1.cells;
        const double h1 = a1.spacing();
        const double hw = std::round(settings.transverse_half_width / h1) * h1;
        grid = grid.with_window_transverse(a1.period, n1, -hw, hw);
    }
    const double h = a0.spacing();
    std::vector<double> ratio(cell.size()), plateau(cell.size());
    for (long p1 = 0; p1 < lines_of(cell); ++p1) {
        for (long p0 = 0; p0 < a0.cells; ++p0) {
            const std::size_t here = cell.index(p0, p1);
            const std::size_t next = cell.index((p0 + 1) % a0.cells, p1);
            const std::size_t prev = cell.index((p0 + a0.cells - 1) % a0.cells, p1);
            ratio[here] = std::exp(-seed.lambda * h) * seed.v[here] / seed.v[next];
            plateau[here] = seed.p_cell[here] / seed.p_cell[prev];
        }
    }
    grid = grid.with_decay_tail(seed.lambda, std::move(ratio), std::move(plateau));

    seed.u0 = Field{grid, std::vector<double>(grid.size()), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t ph = grid.phase_index(i);
        const double x1 = grid.coordinate(i)[0];
        seed.u0.values[i] = std::min(seed.p_cell[ph], amplitude * std::exp(seed.lambda * (x1 - shift)) * seed.v[ph]);
    }
    return seed;
}

RecenterPolicy front_policy(const Field& seed, const std::vector<double>& p_cell, double lambda,
                            const WaveSettings& settings) {
    const double width = seed.grid.axis(0).spacing() * static_cast<double>(seed.grid.count(0) - 1);
    RecenterPolicy p;
    p.reference_by_phase = p_cell;
    p.level = settings.level;
    p.trigger = settings.trigger * width;
    p.target = settings.front_at * width;
    p.fill_rate = lambda;
    return p;
}

SpeedMeasurement measure_speed(const Trajectory& trajectory, const std::vector<double>& p_cell, double level) {
    if (trajectory.frames.size() < 4) fail(ErrorKind::insufficient_record, "speed fit needs at least 4 frames");
    SpeedMeasurement out;
    for (const Field& f : trajectory.frames) {
        const Axis& a = f.grid.axis(0);
        const double x_lo = a.coordinate(0);
        const double x_hi = a.coordinate(a.count - 1);
        const auto x = front_position(f, p_cell, level);
        if (!x || *x < x_lo + 5.0 * a.period || *x > x_hi - 5.0 * a.period) {
            std::ostringstream msg;
            msg << "front at t = " << f.t << " is within 5 periods of the window edge";
            fail(ErrorKind::front_left_window, msg.str());
        }
        out.t.push_back(f.t);
        out.X.push_back(*x);
    }
    const double t_mid = 0.5 * (out.t.front() + out.t.back());
    const auto first = static_cast<std::size_t>(std::lower_bound(out.t.begin(), out.t.end(), t_mid) - out.t.begin());
    const std::span<const double> ts(out.t.data() + first, out.t.size() - first);
    const std::span<const double> xs(out.X.data() + first, out.X.size() - first);
    out.c_meas = -detail::fit_line(ts, xs).slope;
    return out;
}

std::vector<double> sample_trajectory(const Trajectory& trajectory, double t, long g_lo, long g_hi) {
    const auto js = stencil(trajectory, t);
    const auto cov = covered(trajectory, js);
    if (g_lo < cov.first || g_hi > cov.second || g_hi < g_lo)
        fail(ErrorKind::insufficient_record, "requested nodes are outside the recorded windows");
    const Grid& g0 = trajectory.frames[js.first].grid;
    const long lines = lines_of(g0);
    const long width = g_hi - g_lo + 1;
    std::vector<double> out(static_cast<std::size_t>(width * lines), 0.0);
    for (std::size_t j = js.first; j <= js.second; ++j) {
        double w = 1.0;
        for (std::size_t k = js.first; k <= js.second; ++k)
            if (k != j) w *= (t - trajectory.frames[k].t) / (trajectory.frames[j].t - trajectory.frames[k].t);
        const Field& f = trajectory.frames[j];
        for (long i1 = 0; i1 < lines; ++i1)
            for (long g = g_lo; g <= g_hi; ++g) out[static_cast<std::size_t>((g - g_lo) + width * i1)] += w * value_at(f, g, i1);
    }
    return out;
}

double verify_pulsating(const Trajectory& trajectory, double c, double t_from) {
    if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "pulsating check needs a positive speed");
    if (trajectory.frames.empty()) fail(ErrorKind::insufficient_record, "empty trajectory");
    const long cells = trajectory.frames.front().grid.axis(0).cells;
    const double tau = trajectory.frames.front().grid.axis(0).period / c;
    const double t_last = trajectory.frames.back().t;
    double worst = -1.0;
    for (const Field& f : trajectory.frames) {
        if (f.t < t_from - 1e-12 || f.t + tau > t_last + 1e-12) continue;
        const auto js = stencil(trajectory, f.t + tau);
        const auto cov = covered(trajectory, js);
        const long margin = 2 * cells;
        const long lo = std::max(cov.first, axis0_first(f)) + margin;
        const long hi = std::min(cov.second, axis0_end(f) - 1 - cells) - margin;
        if (hi <= lo) continue;
        const std::vector<double> later = sample_trajectory(trajectory, f.t + tau, lo, hi);
        const long width = hi - lo + 1;
        for (long i1 = 0; i1 < lines_of(f.grid); ++i1)
            for (long g = lo; g <= hi; ++g)
                worst = std::max(worst, std::abs(later[static_cast<std::size_t>((g - lo) + width * i1)] -
                                                 value_at(f, g + cells, i1)));
    }
    if (worst < 0.0) fail(ErrorKind::insufficient_record, "no frame pair (t, t + L/c) in the record");
    return worst;
}

double WeightFunction::operator()(double xi) const { return xi <= xi0 ? std::exp(-lambda * (xi - xi0)) : 1.0; }

double xi0_of(const Field& snapshot, const std::vector<double>& p_cell, double c, double eps) {
    const Grid& g = snapshot.grid;
    long last_far = -1;
    for (long i0 = 0; i0 < g.count(0); ++i0) {
        double d = 0.0;
        for (long i1 = 0; i1 < lines_of(g); ++i1) {
            const std::size_t node = g.index(i0, i1);
            d = std::max(d, std::abs(snapshot.values[node] - p_cell[g.phase_index(node)]));
        }
        if (d >= eps) last_far = i0;
    }
    if (last_far < 0 || last_far + 1 >= g.count(0))
        fail(ErrorKind::not_converged, "no xi0: the profile does not settle near p inside the window");
    return g.axis(0).coordinate(last_far + 1) + c * snapshot.t;
}

AsymptoticFit asymptotic_fit(const Field& snapshot, const std::vector<double>& v_cell,
                             const std::vector<double>& p_cell, double c, bool critical, double level) {
    const Grid& g = snapshot.grid;
    const double p_min = *std::min_element(p_cell.begin(), p_cell.end());
    const double upper = 1e-2 * p_min;
    const double lower = 1e-6;
    const long skip = 2 * g.axis(0).cells;  // stay clear of the boundary row
    double xi_front = 0.0;
    if (critical) {
        const auto x = front_position(snapshot, p_cell, level);
        if (!x) fail(ErrorKind::insufficient_decay_region, "no front in the snapshot");
        xi_front = *x + c * snapshot.t;
    }
    std::vector<double> xs, ys;
    for (long i0 = skip; i0 < g.count(0); ++i0) {
        const std::size_t node = g.index(i0, 0);
        const double w = snapshot.values[node];
        if (!(w > lower && w < upper)) continue;
        const double xi = g.axis(0).coordinate(i0) + c * snapshot.t;
        double y = std::log(w / v_cell[g.phase_index(node)]);
        if (critical) {
            const double dist = std::abs(xi - xi_front);
            if (dist < g.axis(0).period) continue;
            y -= std::log(dist);
        }
        xs.push_back(xi);
        ys.push_back(y);
    }
    const double span = xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end()) - *std::min_element(xs.begin(), xs.end());
    if (span < 8.0 * g.axis(0).period) {
        std::ostringstream msg;
        msg << "decay region spans " << span << ", fewer than 8 periods";
        fail(ErrorKind::insufficient_decay_region, msg.str());
    }
    const detail::LineFit lf = detail::fit_line(xs, ys);
    AsymptoticFit out;
    out.lambda_fit = lf.slope;
    out.B = std::exp(lf.intercept);
    out.points = lf.points;
    out.critical = critical;
    return out;
}

WaveRecord construct_wave(const Medium& medium, const SteadyState& steady, double c, const DispersionCurve& curve,
                          const WaveSettings& settings) {
    require_autonomous(medium);
    const FrontSeed seed = build_front_initial(medium, steady, c, curve, settings);
    WaveRecord rec;
    rec.c_target = c;
    rec.c_star = curve.c_star;
    rec.lambda = seed.lambda;
    rec.critical = c <= curve.c_star + 1e-8 * std::max(1.0, curve.c_star);
    rec.v_cell = seed.v;
    rec.p_cell = seed.p_cell;
    rec.u_max = *std::max_element(seed.p_cell.begin(), seed.p_cell.end());
    rec.dt = settings.dt.value_or(default_step(medium, seed.u0.grid, rec.u_max));

    const Stepper stepper(medium, seed.u0.grid, rec.dt, rec.u_max);
    const long n_steps = std::lround(settings.t_end / rec.dt);
    const long every = std::max(1L, std::lround(settings.record_dt / rec.dt));
    EvolveOptions opts;
    opts.t_end = static_cast<double>(n_steps) * rec.dt;
    for (long k = every; k <= n_steps; k += every) opts.record_times.push_back(static_cast<double>(k) * rec.dt);
    rec.policy = front_policy(seed.u0, seed.p_cell, seed.lambda, settings);
    opts.recenter = rec.policy;
    rec.trajectory = evolve(seed.u0, stepper, opts);
    rec.profile = rec.trajectory.frames.back();

    const SpeedMeasurement sp = measure_speed(rec.trajectory, seed.p_cell, settings.level);
    rec.c_meas = sp.c_meas;
    rec.t = sp.t;
    rec.X = sp.X;
    rec.pulsating_residual = verify_pulsating(rec.trajectory, rec.c_meas, settings.pulsating_from);
    rec.eps = settings.eps_fraction * *std::min_element(seed.p_cell.begin(), seed.p_cell.end());
    rec.xi0 = xi0_of(rec.profile, seed.p_cell, rec.c_meas, rec.eps);
    if (settings.fit_far_field)
        rec.fit = asymptotic_fit(rec.profile, seed.v, seed.p_cell, rec.c_meas, rec.critical, settings.level);
    return rec;
}

UniquenessResult uniqueness_experiment(const Medium& medium, const SteadyState& steady, double c,
                                       const DispersionCurve& curve, const SeedSpec& first, const SeedSpec& second,
                                       double t_end, const WaveSettings& settings) {
    require_autonomous(medium);
    if (c <= curve.c_star + 1e-8) fail(ErrorKind::subcritical_speed, "uniqueness experiment needs c > c*");
    const FrontSeed a = build_front_initial(medium, steady, c, curve, settings, first.amplitude, first.shift);
    const FrontSeed b = build_front_initial(medium, steady, c, curve, settings, second.amplitude, second.shift);

    UniquenessResult out;
    out.expected_shift = (second.shift - first.shift) - std::log(second.amplitude / first.amplitude) / a.lambda;
    out.spacing = a.u0.grid.axis(0).spacing();
    const double L = a.u0.grid.axis(0).period;
    const double u_max = *std::max_element(a.p_cell.begin(), a.p_cell.end());
    const double dt = settings.dt.value_or(default_step(medium, a.u0.grid, u_max));
    const Stepper stepper(medium, a.u0.grid, dt, u_max);

    const long every = std::max(1L, std::lround(settings.record_dt / dt));
    const double rec = static_cast<double>(every) * dt;
    const long t_steps = std::lround(t_end / dt);
    out.t_end = static_cast<double>(t_steps) * dt;
    const double tau_max = (std::abs(out.expected_shift) + 3.0 * L) / c;
    const long extra = static_cast<long>(std::ceil(tau_max / rec)) + 2;
    EvolveOptions opts;
    opts.t_end = out.t_end + static_cast<double>(extra) * rec;
    // sparse frames over the second half fix the discrete front speed
    const long sparse = std::max(1L, std::lround(1.0 / rec));
    std::vector<double> speed_times;
    for (long k = t_steps / (2 * every); static_cast<double>(k * every) * dt < out.t_end - tau_max - rec; k += sparse)
        speed_times.push_back(static_cast<double>(k * every) * dt);
    opts.record_times = speed_times;
    for (long k = -extra; k <= extra; ++k) {
        const double tk = out.t_end + static_cast<double>(k) * rec;
        if (tk > 0.0) opts.record_times.push_back(tk);
    }
    opts.recenter = front_policy(a.u0, a.p_cell, a.lambda, settings);
    const auto runs = evolve_ensemble({a.u0, b.u0}, stepper, opts);
    const Trajectory& one = runs[0];
    const Trajectory& two = runs[1];

    // the discrete wave moves at c_meas, not c: time offsets map to ξ shifts through it
    std::vector<double> ts, xs;
    for (const Field& f : one.frames) {
        if (!std::binary_search(speed_times.begin(), speed_times.end(), f.t, [](double x, double y) { return x < y - 1e-9; }))
            continue;
        const auto X = front_position(f, a.p_cell, settings.level);
        if (!X) fail(ErrorKind::not_converged, "no front in a speed frame");
        ts.push_back(f.t);
        xs.push_back(*X);
    }
    if (ts.size() < 4) fail(ErrorKind::insufficient_record, "uniqueness run too short to measure the front speed");
    out.c_meas = -detail::fit_line(ts, xs).slope;
    const double speed = out.c_meas;

    const Field* ref = nullptr;
    for (const Field& f : one.frames)
        if (std::abs(f.t - out.t_end) <= 1e-9) ref = &f;
    if (!ref) fail(ErrorKind::insufficient_record, "reference frame missing");
    const long cells = ref->grid.axis(0).cells;

    auto distance = [&](double s) {
        const double t = out.t_end + s / speed;
        const auto cov = covered(two, stencil(two, t));
        const long lo = std::max(cov.first, axis0_first(*ref)) + 2 * cells;
        const long hi = std::min(cov.second, axis0_end(*ref) - 1) - 2 * cells;
        const std::vector<double> other = sample_trajectory(two, t, lo, hi);
        const long width = hi - lo + 1;
        double d = 0.0;
        for (long i1 = 0; i1 < lines_of(ref->grid); ++i1)
            for (long g = lo; g <= hi; ++g)
                d = std::max(d, std::abs(value_at(*ref, g, i1) - other[static_cast<std::size_t>((g - lo) + width * i1)]));
        return d;
    };

    // coarse scan over recorded offsets, then golden section between neighbours
    double best_s = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (long k = -extra + 1; k <= extra - 1; ++k) {
        const double s = static_cast<double>(k) * rec * speed;
        if (std::abs(s) > tau_max * speed) continue;
        const double d = distance(s);
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    double lo = best_s - rec * speed;
    double hi = best_s + rec * speed;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = distance(x1);
    double f2 = distance(x2);
    while (hi - lo > 1e-4 * out.spacing) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = distance(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = distance(x2);
        }
    }
    if (std::min(f1, f2) < best_d) {
        best_d = std::min(f1, f2);
        best_s = f1 <= f2 ? x1 : x2;
    }
    out.shift = best_s;
    out.distance = best_d;
    out.unaligned_distance = distance(0.0);
    return out;
}

}  // namespace pulsewave
