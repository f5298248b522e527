#include "pulsewave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "pulsewave/discretization.hpp"
#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

bool held_by_rule(const Grid& grid, long i0) {
    const Axis& a = grid.axis(0);
    if (a.periodic || a.rule != BoundaryRule::clamp_to_limits) return false;
    return i0 == 0 || i0 == a.count - 1;
}

bool robin_node(const Grid& grid, long i0) {
    const Axis& a = grid.axis(0);
    return !a.periodic && a.rule == BoundaryRule::decay_tail && i0 == 0;
}

bool plateau_node(const Grid& grid) {
    const Axis& a = grid.axis(0);
    return !a.periodic && a.rule == BoundaryRule::decay_tail;
}

long steps_for(double span, double dt, const char* what) {
    const double k = span / dt;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * std::max(1.0, kr)) {
        std::ostringstream msg;
        msg << what << " " << span << " is not a multiple of the step " << dt;
        fail(ErrorKind::invalid_argument, msg.str());
    }
    return static_cast<long>(kr);
}

}  // namespace

double step_budget(const Medium& medium, double u_max) {
    const double slope = sup_reaction_slope(medium, u_max);
    if (!(slope > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (2.0 * slope);
}

double default_step(const Medium& medium, const Grid& grid, double u_max) {
    return std::min(step_budget(medium, u_max), grid.axis(0).spacing());
}

Stepper::Stepper(const Medium& medium, Grid grid, double dt, double u_max)
    : medium_(medium), grid_(std::move(grid)), dt_(dt), time_dependent_(medium.time_dependent()) {
    if (!(dt > 0.0)) fail(ErrorKind::invalid_argument, "time step must be positive");
    const double budget = step_budget(medium, u_max);
    if (dt > budget * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step " << dt << " exceeds the monotonicity budget " << budget;
        fail(ErrorKind::step_too_large, msg.str());
    }
    held_.assign(grid_.size(), false);
    for (std::size_t node = 0; node < grid_.size(); ++node)
        held_[node] = held_by_rule(grid_, static_cast<long>(node % static_cast<std::size_t>(grid_.count(0))));
    if (!time_dependent_) {
        cached_ = factor(0.0);
        reactions(0.0, cached_reaction_);
    }
}

void Stepper::reactions(double t, std::vector<LocalReaction>& out) const {
    const Grid cell = grid_.cell();
    out.resize(cell.size());
    for (std::size_t i = 0; i < cell.size(); ++i) out[i] = medium_.reaction_at(cell.coordinate(i), t);
}

Stepper::Factorization Stepper::factor(double t_mid) const {
    Factorization fac;
    auto build = [&](const DiscreteOperator& d, const std::vector<std::size_t>& nodes, bool cyclic, bool robin,
                     bool plateau) {
        const auto& m = d.matrix();
        const std::size_t n = nodes.size();
        std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const auto r = static_cast<int>(nodes[k]);
            const bool has_lo = k > 0 || cyclic;
            const bool has_hi = k + 1 < n || cyclic;
            if (has_lo) lo[k] = -dt_ * m.coeff(r, static_cast<int>(nodes[(k + n - 1) % n]));
            if (has_hi) up[k] = -dt_ * m.coeff(r, static_cast<int>(nodes[(k + 1) % n]));
            di[k] = 1.0 - dt_ * m.coeff(r, r);
        }
        if (robin) {
            lo[0] = 0.0;
            di[0] = 1.0;
            up[0] = -grid_.tail_ratio(static_cast<long>(nodes[0]) / grid_.count(0));
        }
        if (plateau) {
            lo[n - 1] = -grid_.plateau_ratio(static_cast<long>(nodes[0]) / grid_.count(0));
            di[n - 1] = 1.0;
            up[n - 1] = 0.0;
        }
        return Line{nodes, Tridiagonal(std::move(lo), std::move(di), std::move(up), cyclic), robin, plateau};
    };

    const long n0 = grid_.count(0);
    const long n1 = grid_.dimension() == 2 ? grid_.count(1) : 1;
    const DiscreteOperator d0 = assemble_divergence_axis(grid_, medium_, 0, t_mid);
    for (long i1 = 0; i1 < n1; ++i1) {
        std::vector<std::size_t> nodes(static_cast<std::size_t>(n0));
        for (long i0 = 0; i0 < n0; ++i0) nodes[static_cast<std::size_t>(i0)] = grid_.index(i0, i1);
        fac.axis0.push_back(build(d0, nodes, grid_.axis(0).periodic, robin_node(grid_, 0), plateau_node(grid_)));
    }
    if (grid_.dimension() == 2) {
        const DiscreteOperator d1 = assemble_divergence_axis(grid_, medium_, 1, t_mid);
        for (long i0 = 0; i0 < n0; ++i0) {
            std::vector<std::size_t> nodes(static_cast<std::size_t>(n1));
            for (long i1 = 0; i1 < n1; ++i1) nodes[static_cast<std::size_t>(i1)] = grid_.index(i0, i1);
            fac.axis1.push_back(build(d1, nodes, grid_.axis(1).periodic, false, false));
        }
    }
    return fac;
}

void Stepper::step(Field& u) const {
    if (!u.grid.same_shape(grid_)) fail(ErrorKind::incompatible_grid, "field grid does not match the stepper");
    const double t_mid = u.t + 0.5 * dt_;
    Factorization local;
    std::vector<LocalReaction> local_reaction;
    if (time_dependent_) {
        local = factor(t_mid);
        reactions(t_mid, local_reaction);
    }
    const Factorization& fac = time_dependent_ ? local : cached_;
    const std::vector<LocalReaction>& rx = time_dependent_ ? local_reaction : cached_reaction_;

    std::vector<double>& v = u.values;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (held_[i]) continue;
        v[i] += dt_ * rx[grid_.phase_index(i)].f(v[i]);
    }
    for (const Line& line : fac.axis0) {
        // axis-0 lines are contiguous
        std::span<double> seg(v.data() + line.nodes.front(), line.nodes.size());
        if (line.robin) seg[0] = 0.0;
        if (line.plateau) seg[seg.size() - 1] = 0.0;
        line.solver.solve(seg);
    }
    if (!fac.axis1.empty()) {
        std::vector<double> buf;
        for (const Line& line : fac.axis1) {
            buf.resize(line.nodes.size());
            for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = v[line.nodes[k]];
            line.solver.solve(buf);
            for (std::size_t k = 0; k < buf.size(); ++k) v[line.nodes[k]] = buf[k];
        }
    }
    u.t += dt_;
}

Field step(const Field& u, const Medium& medium, double dt, std::optional<double> u_max) {
    double bound = u_max.value_or(0.0);
    if (!u_max) {
        const double top = u.values.empty() ? 0.0 : *std::max_element(u.values.begin(), u.values.end());
        bound = std::max(top, 0.0);
        try {
            bound = std::max(bound, check_bound_M(medium, std::max(16.0, 4.0 * top)));
        } catch (const Error&) {
        }
    }
    const Stepper stepper(medium, u.grid, dt, bound);
    Field out = u;
    stepper.step(out);
    return out;
}

std::optional<double> front_position(const Field& u, const std::vector<double>& reference, double level) {
    const Grid& g = u.grid;
    const long n0 = g.count(0);
    auto gap = [&](long i0) {
        const std::size_t node = g.index(i0, 0);
        return u.values[node] - level * reference[g.phase_index(node)];
    };
    for (long i0 = 0; i0 < n0; ++i0) {
        const double gi = gap(i0);
        if (gi < 0.0) continue;
        const double x = g.axis(0).coordinate(i0);
        if (i0 == 0) return x;
        const double gl = gap(i0 - 1);
        return x - g.axis(0).spacing() * gi / (gi - gl);
    }
    return std::nullopt;
}

Field shift_window(const Field& u, long periods, double fill_rate) {
    Field out;
    out.grid = u.grid.shifted(periods);
    out.t = u.t;
    out.values.assign(u.values.size(), 0.0);
    const long n0 = u.grid.count(0);
    const long n1 = u.grid.dimension() == 2 ? u.grid.count(1) : 1;
    const long cells = u.grid.axis(0).cells;
    const long offset = periods * cells;
    const double factor = fill_rate > 0.0 ? std::exp(-fill_rate * u.grid.axis(0).period) : 0.0;
    for (long i1 = 0; i1 < n1; ++i1) {
        auto at = [&](long i0) -> double& { return out.values[u.grid.index(i0, i1)]; };
        for (long i0 = 0; i0 < n0; ++i0) {
            const long src = i0 + offset;
            if (src >= 0 && src < n0) at(i0) = u.values[u.grid.index(src, i1)];
        }
        // left fill from the right, right fill by repeating the last period
        for (long i0 = std::min(n0, -offset) - 1; i0 >= 0; --i0) at(i0) = factor * at(i0 + cells);
        for (long i0 = std::max(0L, n0 - offset); i0 < n0; ++i0) at(i0) = at(i0 - cells);
        // a held upper end keeps its value: the new end node has the same phase
        if (offset < 0 && held_by_rule(u.grid, n0 - 1)) at(n0 - 1) = u.values[u.grid.index(n0 - 1, i1)];
    }
    return out;
}

std::vector<Trajectory> evolve_ensemble(const std::vector<Field>& initial, const Stepper& stepper,
                                        const EvolveOptions& options) {
    if (initial.empty()) fail(ErrorKind::invalid_argument, "nothing to evolve");
    const double t0 = initial.front().t;
    const double dt = stepper.dt();
    for (const Field& f : initial) {
        if (f.values.size() != f.grid.size()) fail(ErrorKind::invalid_argument, "field length does not match grid");
        if (f.t != t0) fail(ErrorKind::invalid_argument, "ensemble members start at different times");
    }
    if (options.t_end < t0) fail(ErrorKind::invalid_argument, "t_end precedes the initial time");
    const long n_steps = steps_for(options.t_end - t0, dt, "evolution span");
    std::set<long> record;
    for (double tr : options.record_times) {
        if (tr < t0 - 1e-12 || tr > options.t_end + 1e-12)
            fail(ErrorKind::invalid_argument, "record time outside the evolution span");
        record.insert(steps_for(tr - t0, dt, "record time"));
    }
    if (options.recenter) {
        const RecenterPolicy& p = *options.recenter;
        const Grid& g = initial.front().grid;
        if (g.is_periodic()) fail(ErrorKind::incompatible_grid, "recentering needs a window grid");
        if (p.reference_by_phase.size() != g.cell().size())
            fail(ErrorKind::invalid_argument, "recentering reference must cover one periodicity cell");
        const double width = g.axis(0).spacing() * static_cast<double>(g.count(0) - 1);
        if (!(p.trigger > 0.0 && p.target > p.trigger && p.target < width))
            fail(ErrorKind::invalid_argument, "recentering needs 0 < trigger < target < window width");
    }

    std::vector<Field> state = initial;
    std::vector<Trajectory> out(initial.size());
    for (std::size_t m = 0; m < state.size(); ++m) {
        out[m].dt = dt;
        out[m].frames.push_back(state[m]);
    }
    for (long k = 1; k <= n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        for (Field& f : state) {
            stepper.step(f);
            f.t = t;
        }
        if (options.recenter) {
            const RecenterPolicy& p = *options.recenter;
            const auto x = front_position(state.front(), p.reference_by_phase, p.level);
            const Axis& a = state.front().grid.axis(0);
            const double x_lo = a.coordinate(0);
            if (x && *x - x_lo < p.trigger) {
                const long periods = -std::lround((p.target - (*x - x_lo)) / a.period);
                if (periods != 0) {
                    for (Field& f : state) f = shift_window(f, periods, p.fill_rate);
                    for (Trajectory& tr : out) tr.recenters.push_back({t, periods});
                }
            }
        }
        if (record.count(k)) {
            for (std::size_t m = 0; m < state.size(); ++m) out[m].frames.push_back(state[m]);
        }
    }
    return out;
}

Trajectory evolve(const Field& u0, const Stepper& stepper, const EvolveOptions& options) {
    return std::move(evolve_ensemble({u0}, stepper, options).front());
}

bool comparison_check(const Field& u0, const Field& v0, const Stepper& stepper, double t_end) {
    if (u0.values.size() != v0.values.size()) fail(ErrorKind::invalid_argument, "fields differ in size");
    for (std::size_t i = 0; i < u0.values.size(); ++i)
        if (u0.values[i] > v0.values[i]) fail(ErrorKind::invalid_argument, "initial data are not ordered");
    Field u = u0;
    Field v = v0;
    const long n = steps_for(t_end - u0.t, stepper.dt(), "comparison span");
    for (long k = 0; k < n; ++k) {
        stepper.step(u);
        stepper.step(v);
        for (std::size_t i = 0; i < u.values.size(); ++i)
            if (u.values[i] > v.values[i] + 1e-12) return false;
    }
    return true;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const bool two_d = !trajectory.frames.empty() && trajectory.frames.front().grid.dimension() == 2;
    out << (two_d ? "t,x1,x2,u\n" : "t,x,u\n");
    char buf[160];
    for (const Field& f : trajectory.frames) {
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const Point x = f.grid.coordinate(i);
            if (two_d) std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", f.t, x[0], x[1], f.values[i]);
            else std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.t, x[0], f.values[i]);
            out << buf;
        }
    }
}

namespace {

nlohmann::json grid_json(const Grid& g) {
    nlohmann::json axes = nlohmann::json::array();
    for (int k = 0; k < g.dimension(); ++k) {
        const Axis& a = g.axis(k);
        const char* rule = a.rule == BoundaryRule::zero_flux ? "zero_flux"
                           : a.rule == BoundaryRule::decay_tail ? "decay_tail"
                                                                : "clamp_to_limits";
        axes.push_back({{"period", a.period}, {"cells", a.cells}, {"first", a.first}, {"count", a.count},
                        {"periodic", a.periodic}, {"rule", rule}});
    }
    nlohmann::json j{{"axes", axes}};
    if (g.axis(0).rule == BoundaryRule::decay_tail && !g.is_periodic()) {
        j["tail_rate"] = g.tail_rate();
        j["tail_ratio"] = g.tail_ratio_table();
        j["plateau_ratio"] = g.plateau_ratio_table();
    }
    return j;
}

BoundaryRule rule_from(const std::string& s) {
    if (s == "zero_flux") return BoundaryRule::zero_flux;
    if (s == "decay_tail") return BoundaryRule::decay_tail;
    return BoundaryRule::clamp_to_limits;
}

Grid grid_from_json(const nlohmann::json& j) {
    const auto& axes = j.at("axes");
    auto axis = [&](std::size_t k) { return axes.at(k); };
    const auto a0 = axis(0);
    Grid g;
    if (a0.at("periodic").get<bool>()) {
        std::vector<double> periods;
        std::vector<int> cells;
        for (const auto& a : axes) {
            periods.push_back(a.at("period").get<double>());
            cells.push_back(a.at("cells").get<int>());
        }
        return Grid::periodic(periods, cells);
    }
    const double period = a0.at("period").get<double>();
    const int cells = a0.at("cells").get<int>();
    const double h = period / cells;
    const long first = a0.at("first").get<long>();
    const long count = a0.at("count").get<long>();
    const BoundaryRule rule = rule_from(a0.at("rule").get<std::string>());
    g = Grid::line(period, cells, static_cast<double>(first) * h, static_cast<double>(first + count - 1) * h,
                   rule == BoundaryRule::decay_tail ? BoundaryRule::clamp_to_limits : rule);
    if (axes.size() == 2) {
        const auto a1 = axis(1);
        const double p1 = a1.at("period").get<double>();
        const int c1 = a1.at("cells").get<int>();
        if (a1.at("periodic").get<bool>()) {
            g = g.with_periodic_transverse(p1, c1);
        } else {
            const double h1 = p1 / c1;
            const long f1 = a1.at("first").get<long>();
            const long n1 = a1.at("count").get<long>();
            g = g.with_window_transverse(p1, c1, static_cast<double>(f1) * h1, static_cast<double>(f1 + n1 - 1) * h1);
        }
    }
    if (rule == BoundaryRule::decay_tail)
        g = g.with_decay_tail(j.at("tail_rate").get<double>(), j.at("tail_ratio").get<std::vector<double>>(),
                              j.value("plateau_ratio", std::vector<double>{}));
    return g;
}

}  // namespace

void write_trajectory_binary(const std::string& stem, const Trajectory& trajectory) {
    std::ofstream bin(stem + ".bin", std::ios::binary);
    if (!bin) fail(ErrorKind::invalid_argument, "cannot open " + stem + ".bin");
    nlohmann::json frames = nlohmann::json::array();
    std::size_t offset = 0;
    for (const Field& f : trajectory.frames) {
        bin.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        frames.push_back({{"t", f.t}, {"offset", offset}, {"count", f.values.size()}, {"grid", grid_json(f.grid)}});
        offset += f.values.size() * sizeof(double);
    }
    nlohmann::json recenters = nlohmann::json::array();
    for (const RecenterEvent& e : trajectory.recenters) recenters.push_back({{"t", e.t}, {"periods", e.periods}});
    const nlohmann::json side{{"format", "float64-le"},
                              {"dt", trajectory.dt},
                              {"scheme", trajectory.scheme},
                              {"frames", frames},
                              {"recenters", recenters}};
    std::ofstream js(stem + ".json");
    js << side.dump(2) << '\n';
}

Trajectory read_trajectory_binary(const std::string& stem) {
    std::ifstream js(stem + ".json");
    std::ifstream bin(stem + ".bin", std::ios::binary);
    if (!js || !bin) fail(ErrorKind::invalid_argument, "cannot open trajectory " + stem);
    const nlohmann::json side = nlohmann::json::parse(js);
    Trajectory tr;
    tr.dt = side.at("dt").get<double>();
    tr.scheme = side.at("scheme").get<std::string>();
    for (const auto& fr : side.at("frames")) {
        Field f;
        f.t = fr.at("t").get<double>();
        f.grid = grid_from_json(fr.at("grid"));
        f.values.resize(fr.at("count").get<std::size_t>());
        bin.seekg(static_cast<std::streamoff>(fr.at("offset").get<std::size_t>()));
        bin.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        if (!bin) fail(ErrorKind::invalid_argument, "truncated trajectory data in " + stem + ".bin");
        tr.frames.push_back(std::move(f));
    }
    for (const auto& e : side.at("recenters")) tr.recenters.push_back({e.at("t").get<double>(), e.at("periods").get<long>()});
    return tr;
}

}  // namespace pulsewave
