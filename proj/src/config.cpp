#include "pulsewave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

using json = nlohmann::json;

// Walks the parsed tree, collecting every violation instead of stopping at the first.
class Reader {
public:
    std::vector<std::string> errors;

    void complain(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

    // Object check plus unknown-key report. Returns false if `j` is not an object.
    bool object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
        if (!j.is_object()) {
            complain(path, "expected an object");
            return false;
        }
        const std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& [k, v] : j.items())
            if (!known.count(k)) complain(join(path, k), "unknown field");
        return true;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    void number(const json& obj, const char* key, const std::string& path, double& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            complain(join(path, key), "expected a number");
            return;
        }
        out = v.get<double>();
        if (!std::isfinite(out)) complain(join(path, key), "must be finite");
    }

    // Optional number where "auto" or null selects the default.
    void optional_number(const json& obj, const char* key, const std::string& path, std::optional<double>& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "auto")) {
            out.reset();
            return;
        }
        double d = 0.0;
        number(obj, key, path, d);
        if (v.is_number()) out = d;
    }

    template <class Int>
    void integer(const json& obj, const char* key, const std::string& path, Int& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            complain(join(path, key), "expected an integer");
            return;
        }
        if constexpr (std::is_unsigned_v<Int>) {
            if (v.is_number_unsigned() || v.get<long long>() >= 0)
                out = v.get<Int>();
            else
                complain(join(path, key), "must be non-negative");
        } else {
            out = v.get<Int>();
        }
    }

    void boolean(const json& obj, const char* key, const std::string& path, bool& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_boolean())
            complain(join(path, key), "expected true or false");
        else
            out = v.get<bool>();
    }

    void string(const json& obj, const char* key, const std::string& path, std::string& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_string())
            complain(join(path, key), "expected a string");
        else
            out = v.get<std::string>();
    }

    void numbers(const json& obj, const char* key, const std::string& path, std::vector<double>& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_array()) {
            complain(join(path, key), "expected an array of numbers");
            return;
        }
        std::vector<double> vals;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                complain(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
                continue;
            }
            vals.push_back(v[i].get<double>());
        }
        out = vals;
    }

    // A series is a bare number (constant) or {constant, terms}.
    void series(const json& obj, const char* key, const std::string& path, SeriesDecl& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        const std::string p = join(path, key);
        if (v.is_number()) {
            out = SeriesDecl{v.get<double>(), {}};
            return;
        }
        if (!object(v, p, {"constant", "terms"})) return;
        out.terms.clear();
        number(v, "constant", p, out.constant);
        if (!v.contains("terms")) return;
        const json& ts = v.at("terms");
        if (!ts.is_array()) {
            complain(p + ".terms", "expected an array");
            return;
        }
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const std::string tp = p + ".terms[" + std::to_string(i) + "]";
            if (!object(ts[i], tp, {"amplitude", "k1", "k2", "m", "phase"})) continue;
            FourierTerm t;
            number(ts[i], "amplitude", tp, t.amplitude);
            integer(ts[i], "k1", tp, t.k1);
            integer(ts[i], "k2", tp, t.k2);
            integer(ts[i], "m", tp, t.m);
            std::string phase = "cos";
            string(ts[i], "phase", tp, phase);
            if (phase == "sin")
                t.phase = Phase::sin;
            else if (phase != "cos")
                complain(tp + ".phase", "expected \"cos\" or \"sin\"");
            out.terms.push_back(t);
        }
    }
};

void positive(Reader& r, double v, const std::string& path) {
    if (!(v > 0.0)) r.complain(path, "must be > 0");
}

void read_medium(Reader& r, const json& j, MediumDecl& m) {
    if (!r.object(j, "medium", {"periods", "time_period", "diffusion", "reaction"})) return;
    r.numbers(j, "periods", "medium", m.periods);
    r.optional_number(j, "time_period", "medium", m.time_period);
    if (j.contains("diffusion")) {
        const json& d = j.at("diffusion");
        if (d.is_number()) {
            m.a11 = SeriesDecl{d.get<double>(), {}};
            m.a22 = m.a11;
        } else if (r.object(d, "medium.diffusion", {"a11", "a22", "a12"})) {
            r.series(d, "a11", "medium.diffusion", m.a11);
            m.a22 = m.a11;
            r.series(d, "a22", "medium.diffusion", m.a22);
            if (d.contains("a12")) {
                SeriesDecl a12{0.0, {}};
                r.series(d, "a12", "medium.diffusion", a12);
                bool zero = a12.constant == 0.0;
                for (const auto& t : a12.terms) zero = zero && t.amplitude == 0.0;
                if (!zero) r.complain("medium.diffusion.a12", "off-diagonal diffusion is not supported");
            }
        }
    }
    if (j.contains("reaction")) {
        const json& re = j.at("reaction");
        if (r.object(re, "medium.reaction", {"kind", "mu", "table"})) {
            r.string(re, "kind", "medium.reaction", m.reaction);
            r.series(re, "mu", "medium.reaction", m.mu);
            r.string(re, "table", "medium.reaction", m.table);
        }
    }
}

void check_medium(Reader& r, const MediumDecl& m, const std::filesystem::path& base) {
    const std::size_t n = m.periods.size();
    if (n != 1 && n != 2) r.complain("medium.periods", "expected 1 or 2 periods");
    for (std::size_t i = 0; i < n; ++i) positive(r, m.periods[i], "medium.periods[" + std::to_string(i) + "]");
    if (m.time_period) positive(r, *m.time_period, "medium.time_period");
    auto terms = [&](const SeriesDecl& s, const std::string& path) {
        for (std::size_t i = 0; i < s.terms.size(); ++i) {
            const FourierTerm& t = s.terms[i];
            const std::string tp = path + ".terms[" + std::to_string(i) + "]";
            if (t.k2 != 0 && n < 2) r.complain(tp + ".k2", "one-dimensional media have no x2 dependence");
            if (t.m != 0 && !m.time_period) r.complain(tp + ".m", "time dependence needs medium.time_period");
        }
    };
    terms(m.a11, "medium.diffusion.a11");
    if (n == 2) terms(m.a22, "medium.diffusion.a22");
    if (m.reaction == "kpp_logistic") {
        terms(m.mu, "medium.reaction.mu");
        if (!m.table.empty()) r.complain("medium.reaction.table", "only used by kind \"tabulated\"");
    } else if (m.reaction == "tabulated") {
        if (m.table.empty())
            r.complain("medium.reaction.table", "tabulated reactions need a table file");
        else if (!std::filesystem::is_regular_file(base / m.table))
            r.complain("medium.reaction.table", "file not found: " + (base / m.table).string());
        if (n != 1) r.complain("medium.reaction.table", "tables are one-dimensional in x");
    } else {
        r.complain("medium.reaction.kind", "expected \"kpp_logistic\" or \"tabulated\"");
    }
}

void read_perturbation(Reader& r, const json& j, const std::string& path, PerturbationSpec& p, bool& seeded) {
    if (!r.object(j, path, {"kind", "amplitude", "width", "rate", "sign", "seed", "offset"})) return;
    std::string kind = "compact_bump", sign = "positive";
    r.string(j, "kind", path, kind);
    r.string(j, "sign", path, sign);
    if (kind == "compact_bump")
        p.kind = PerturbationKind::compact_bump;
    else if (kind == "weighted_tail")
        p.kind = PerturbationKind::weighted_tail;
    else
        r.complain(path + ".kind", "expected \"compact_bump\" or \"weighted_tail\"");
    if (sign == "positive")
        p.sign = PerturbationSign::positive;
    else if (sign == "negative")
        p.sign = PerturbationSign::negative;
    else if (sign == "mixed")
        p.sign = PerturbationSign::mixed;
    else
        r.complain(path + ".sign", "expected \"positive\", \"negative\" or \"mixed\"");
    r.number(j, "amplitude", path, p.amplitude);
    r.number(j, "width", path, p.width);
    r.number(j, "rate", path, p.rate);
    r.number(j, "offset", path, p.offset);
    seeded = j.contains("seed");
    r.integer(j, "seed", path, p.seed);
    if (!(p.amplitude >= 0.0)) r.complain(path + ".amplitude", "must be >= 0");
    if (p.kind == PerturbationKind::compact_bump) positive(r, p.width, path + ".width");
    if (p.kind == PerturbationKind::weighted_tail) positive(r, p.rate, path + ".rate");
}

void read_seed_spec(Reader& r, const json& j, const char* key, const std::string& path, SeedSpec& s) {
    if (!j.contains(key)) return;
    const std::string p = path + "." + key;
    if (!r.object(j.at(key), p, {"shift", "amplitude"})) return;
    r.number(j.at(key), "shift", p, s.shift);
    r.number(j.at(key), "amplitude", p, s.amplitude);
    positive(r, s.amplitude, p + ".amplitude");
}

ExperimentConfig read(const json& root, const std::filesystem::path& base) {
    Reader r;
    ExperimentConfig c;
    c.base_dir = base;
    if (!r.object(root, "", {"medium", "grid", "solver", "speeds", "wave", "perturbations", "stability",
                             "uniqueness", "eigen", "output", "seed", "workers"}))
        fail(ErrorKind::validation_error, "configuration: expected an object at the top level");

    if (!root.contains("medium"))
        r.complain("medium", "required");
    else
        read_medium(r, root.at("medium"), c.medium);
    check_medium(r, c.medium, base);

    if (root.contains("grid") && r.object(root.at("grid"), "grid", {"cells", "window_periods", "transverse_half_width"})) {
        const json& g = root.at("grid");
        r.integer(g, "cells", "grid", c.grid.cells);
        r.number(g, "window_periods", "grid", c.grid.window_periods);
        r.number(g, "transverse_half_width", "grid", c.grid.transverse_half_width);
    }
    {
        const int n = c.grid.cells;
        if (n < 32 || n > 4096 || (n & (n - 1)) != 0)
            r.complain("grid.cells", std::to_string(n) + " is not a power of two between 32 and 4096");
        if (!(c.grid.window_periods >= 20.0)) r.complain("grid.window_periods", "must be >= 20");
        positive(r, c.grid.transverse_half_width, "grid.transverse_half_width");
    }

    if (root.contains("solver") &&
        r.object(root.at("solver"), "solver",
                 {"eigen_tolerance", "residual_gate", "max_iterations", "steady_tolerance", "dt", "lambda_lo",
                  "lambda_hi", "scan_points", "floquet_dt", "samples_per_period"})) {
        const json& s = root.at("solver");
        r.number(s, "eigen_tolerance", "solver", c.solver.eigen_tolerance);
        r.number(s, "residual_gate", "solver", c.solver.residual_gate);
        r.integer(s, "max_iterations", "solver", c.solver.max_iterations);
        r.number(s, "steady_tolerance", "solver", c.solver.steady_tolerance);
        r.optional_number(s, "dt", "solver", c.solver.dt);
        r.number(s, "lambda_lo", "solver", c.solver.lambda_lo);
        r.number(s, "lambda_hi", "solver", c.solver.lambda_hi);
        r.integer(s, "scan_points", "solver", c.solver.scan_points);
        r.optional_number(s, "floquet_dt", "solver", c.solver.floquet_dt);
        r.integer(s, "samples_per_period", "solver", c.solver.samples_per_period);
    }
    positive(r, c.solver.eigen_tolerance, "solver.eigen_tolerance");
    positive(r, c.solver.residual_gate, "solver.residual_gate");
    if (c.solver.max_iterations < 1) r.complain("solver.max_iterations", "must be >= 1");
    positive(r, c.solver.steady_tolerance, "solver.steady_tolerance");
    if (c.solver.dt) positive(r, *c.solver.dt, "solver.dt");
    if (c.solver.floquet_dt) positive(r, *c.solver.floquet_dt, "solver.floquet_dt");
    positive(r, c.solver.lambda_lo, "solver.lambda_lo");
    if (!(c.solver.lambda_hi > c.solver.lambda_lo)) r.complain("solver.lambda_hi", "must exceed solver.lambda_lo");
    if (c.solver.scan_points < 3) r.complain("solver.scan_points", "must be >= 3");
    if (c.solver.samples_per_period < 4) r.complain("solver.samples_per_period", "must be >= 4");

    if (root.contains("speeds") && r.object(root.at("speeds"), "speeds", {"values", "factors", "critical"})) {
        const json& s = root.at("speeds");
        r.numbers(s, "values", "speeds", c.speeds.speeds);
        r.numbers(s, "factors", "speeds", c.speeds.factors);
        r.boolean(s, "critical", "speeds", c.speeds.critical);
    }
    for (std::size_t i = 0; i < c.speeds.speeds.size(); ++i)
        positive(r, c.speeds.speeds[i], "speeds.values[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < c.speeds.factors.size(); ++i)
        if (!(c.speeds.factors[i] >= 1.0))
            r.complain("speeds.factors[" + std::to_string(i) + "]", "must be >= 1 (no waves below c*)");

    if (root.contains("wave") &&
        r.object(root.at("wave"), "wave",
                 {"t_end", "record_dt", "level", "pulsating_from", "eps_fraction", "front_at", "trigger",
                  "fit_far_field"})) {
        const json& w = root.at("wave");
        r.number(w, "t_end", "wave", c.wave.t_end);
        r.number(w, "record_dt", "wave", c.wave.record_dt);
        r.number(w, "level", "wave", c.wave.level);
        r.number(w, "pulsating_from", "wave", c.wave.pulsating_from);
        r.number(w, "eps_fraction", "wave", c.wave.eps_fraction);
        r.number(w, "front_at", "wave", c.wave.front_at);
        r.number(w, "trigger", "wave", c.wave.trigger);
        r.boolean(w, "fit_far_field", "wave", c.wave.fit_far_field);
    }
    positive(r, c.wave.t_end, "wave.t_end");
    positive(r, c.wave.record_dt, "wave.record_dt");
    if (!(c.wave.level > 0.0 && c.wave.level < 1.0)) r.complain("wave.level", "must lie in (0, 1)");
    if (!(c.wave.eps_fraction > 0.0 && c.wave.eps_fraction < 1.0))
        r.complain("wave.eps_fraction", "must lie in (0, 1)");
    if (!(c.wave.pulsating_from >= 0.0 && c.wave.pulsating_from < c.wave.t_end))
        r.complain("wave.pulsating_from", "must lie in [0, wave.t_end)");
    if (!(c.wave.trigger > 0.0 && c.wave.trigger < c.wave.front_at && c.wave.front_at < 1.0))
        r.complain("wave.trigger", "need 0 < trigger < front_at < 1");

    if (root.contains("perturbations")) {
        const json& ps = root.at("perturbations");
        if (!ps.is_array()) {
            r.complain("perturbations", "expected an array");
        } else {
            c.perturbations.assign(ps.size(), PerturbationSpec{});
            c.perturbation_seeded.assign(ps.size(), false);
            for (std::size_t i = 0; i < ps.size(); ++i) {
                bool seeded = false;
                read_perturbation(r, ps[i], "perturbations[" + std::to_string(i) + "]", c.perturbations[i], seeded);
                c.perturbation_seeded[i] = seeded;
            }
        }
    }
    c.perturbation_seeded.resize(c.perturbations.size(), false);

    if (root.contains("stability") &&
        r.object(root.at("stability"), "stability",
                 {"t_end", "critical_t_end", "record_dt", "fit_fraction", "algebraic_window", "weight_lambda"})) {
        const json& s = root.at("stability");
        r.number(s, "t_end", "stability", c.stability.t_end);
        r.number(s, "critical_t_end", "stability", c.stability.critical_t_end);
        r.number(s, "record_dt", "stability", c.stability.record_dt);
        r.number(s, "fit_fraction", "stability", c.stability.fit_fraction);
        r.optional_number(s, "weight_lambda", "stability", c.stability.weight_lambda);
        std::vector<double> win{c.stability.algebraic_lo, c.stability.algebraic_hi};
        r.numbers(s, "algebraic_window", "stability", win);
        if (win.size() != 2) {
            r.complain("stability.algebraic_window", "expected [t_lo, t_hi]");
        } else {
            c.stability.algebraic_lo = win[0];
            c.stability.algebraic_hi = win[1];
        }
    }
    positive(r, c.stability.t_end, "stability.t_end");
    positive(r, c.stability.critical_t_end, "stability.critical_t_end");
    positive(r, c.stability.record_dt, "stability.record_dt");
    if (!(c.stability.fit_fraction > 0.0 && c.stability.fit_fraction <= 1.0))
        r.complain("stability.fit_fraction", "must lie in (0, 1]");
    if (!(c.stability.algebraic_lo >= 10.0)) r.complain("stability.algebraic_window", "must start at t >= 10");
    if (!(c.stability.algebraic_hi > c.stability.algebraic_lo &&
          c.stability.algebraic_hi <= c.stability.critical_t_end))
        r.complain("stability.algebraic_window", "need t_lo < t_hi <= stability.critical_t_end");
    if (c.stability.weight_lambda) positive(r, *c.stability.weight_lambda, "stability.weight_lambda");

    if (root.contains("uniqueness") &&
        r.object(root.at("uniqueness"), "uniqueness", {"speed", "t_end", "first", "second"})) {
        const json& u = root.at("uniqueness");
        r.optional_number(u, "speed", "uniqueness", c.uniqueness.speed);
        r.number(u, "t_end", "uniqueness", c.uniqueness.t_end);
        read_seed_spec(r, u, "first", "uniqueness", c.uniqueness.first);
        read_seed_spec(r, u, "second", "uniqueness", c.uniqueness.second);
    }
    if (c.uniqueness.speed) positive(r, *c.uniqueness.speed, "uniqueness.speed");
    positive(r, c.uniqueness.t_end, "uniqueness.t_end");

    if (root.contains("eigen") && r.object(root.at("eigen"), "eigen", {"lambda", "c"})) {
        r.number(root.at("eigen"), "lambda", "eigen", c.eigen.lambda);
        r.number(root.at("eigen"), "c", "eigen", c.eigen.c);
    }

    r.string(root, "output", "", c.output);
    if (c.output.empty()) r.complain("output", "must not be empty");
    r.integer(root, "seed", "", c.seed);
    r.integer(root, "workers", "", c.workers);
    if (c.workers < 1) r.complain("workers", "must be >= 1");

    if (!r.errors.empty()) {
        std::ostringstream msg;
        msg << r.errors.size() << " violation" << (r.errors.size() == 1 ? "" : "s") << ":";
        for (const auto& e : r.errors) msg << "\n  " << e;
        fail(ErrorKind::validation_error, msg.str());
    }
    set_seed(c, c.seed);
    return c;
}

ordered_json series_json(const SeriesDecl& s) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : s.terms)
        terms.push_back({{"amplitude", t.amplitude},
                         {"k1", t.k1},
                         {"k2", t.k2},
                         {"m", t.m},
                         {"phase", t.phase == Phase::sin ? "sin" : "cos"}});
    return {{"constant", s.constant}, {"terms", terms}};
}

ordered_json optional_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json("auto");
}

PeriodicFunction series_function(const SeriesDecl& s) { return PeriodicFunction(s.constant, s.terms); }

void dump(std::ostringstream& os, const ordered_json& v, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case ordered_json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [k, x] : v.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << ordered_json(k).dump() << ": ";
                dump(os, x, depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                dump(os, v[i], depth + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            const double d = v.get<double>();
            os << (std::isfinite(d) ? format_number(d) : "null");
            return;
        }
        default:
            os << v.dump();
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const ordered_json& value) {
    std::ostringstream os;
    dump(os, value, 0);
    os << "\n";
    return os.str();
}

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte offset just past the offending character
        const std::size_t at = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < at; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        const auto cut = what.find("syntax error");
        if (cut != std::string::npos) what = what.substr(cut);
        std::ostringstream msg;
        msg << "line " << line << ", column " << column << ": " << what;
        fail(ErrorKind::parse_error, msg.str());
    }
    return read(root, base_dir);
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::parse_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::filesystem::path base = path.parent_path();
    if (base.empty()) base = ".";
    return parse_config_text(ss.str(), base);
}

void set_seed(ExperimentConfig& config, std::uint64_t seed) {
    config.seed = seed;
    config.perturbation_seeded.resize(config.perturbations.size(), false);
    for (std::size_t i = 0; i < config.perturbations.size(); ++i)
        if (!config.perturbation_seeded[i]) config.perturbations[i].seed = seed + i;
}

ordered_json effective_config(const ExperimentConfig& c) {
    const MediumDecl& m = c.medium;
    ordered_json diffusion = {{"a11", series_json(m.a11)}};
    if (m.periods.size() == 2) diffusion["a22"] = series_json(m.a22);
    ordered_json reaction = {{"kind", m.reaction}};
    if (m.reaction == "tabulated")
        reaction["table"] = m.table;
    else
        reaction["mu"] = series_json(m.mu);
    ordered_json medium = {{"periods", m.periods},
                           {"time_period", m.time_period ? ordered_json(*m.time_period) : ordered_json(nullptr)},
                           {"diffusion", diffusion},
                           {"reaction", reaction}};

    ordered_json perts = ordered_json::array();
    for (const auto& p : c.perturbations) {
        const char* sign = p.sign == PerturbationSign::positive   ? "positive"
                           : p.sign == PerturbationSign::negative ? "negative"
                                                                  : "mixed";
        perts.push_back({{"kind", p.kind == PerturbationKind::compact_bump ? "compact_bump" : "weighted_tail"},
                         {"amplitude", p.amplitude},
                         {"width", p.width},
                         {"rate", p.rate},
                         {"sign", sign},
                         {"seed", p.seed},
                         {"offset", p.offset}});
    }
    auto seed_spec = [](const SeedSpec& s) { return ordered_json{{"shift", s.shift}, {"amplitude", s.amplitude}}; };

    return {
        {"medium", medium},
        {"grid",
         {{"cells", c.grid.cells},
          {"window_periods", c.grid.window_periods},
          {"transverse_half_width", c.grid.transverse_half_width}}},
        {"solver",
         {{"eigen_tolerance", c.solver.eigen_tolerance},
          {"residual_gate", c.solver.residual_gate},
          {"max_iterations", c.solver.max_iterations},
          {"steady_tolerance", c.solver.steady_tolerance},
          {"dt", optional_json(c.solver.dt)},
          {"lambda_lo", c.solver.lambda_lo},
          {"lambda_hi", c.solver.lambda_hi},
          {"scan_points", c.solver.scan_points},
          {"floquet_dt", optional_json(c.solver.floquet_dt)},
          {"samples_per_period", c.solver.samples_per_period}}},
        {"speeds", {{"values", c.speeds.speeds}, {"factors", c.speeds.factors}, {"critical", c.speeds.critical}}},
        {"wave",
         {{"t_end", c.wave.t_end},
          {"record_dt", c.wave.record_dt},
          {"level", c.wave.level},
          {"pulsating_from", c.wave.pulsating_from},
          {"eps_fraction", c.wave.eps_fraction},
          {"front_at", c.wave.front_at},
          {"trigger", c.wave.trigger},
          {"fit_far_field", c.wave.fit_far_field}}},
        {"perturbations", perts},
        {"stability",
         {{"t_end", c.stability.t_end},
          {"critical_t_end", c.stability.critical_t_end},
          {"record_dt", c.stability.record_dt},
          {"fit_fraction", c.stability.fit_fraction},
          {"algebraic_window", {c.stability.algebraic_lo, c.stability.algebraic_hi}},
          {"weight_lambda", optional_json(c.stability.weight_lambda)}}},
        {"uniqueness",
         {{"speed", optional_json(c.uniqueness.speed)},
          {"t_end", c.uniqueness.t_end},
          {"first", seed_spec(c.uniqueness.first)},
          {"second", seed_spec(c.uniqueness.second)}}},
        {"eigen", {{"lambda", c.eigen.lambda}, {"c", c.eigen.c}}},
        {"output", c.output},
        {"seed", c.seed},
        {"workers", c.workers},
    };
}

namespace {

// CSV with header x,u,f,f_u on a full tensor grid.
Nonlinearity read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::parse_error, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line.rfind("x,u,f,f_u", 0) != 0)
        fail(ErrorKind::parse_error, path.string() + ": line 1: expected header x,u,f,f_u");
    struct Row {
        double x, u, f, fu;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        Row r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.x, &r.u, &r.f, &r.fu) != 4)
            fail(ErrorKind::parse_error, path.string() + ": line " + std::to_string(lineno) + ": expected 4 numbers");
        rows.push_back(r);
    }
    std::vector<double> xs, us;
    for (const Row& r : rows) {
        xs.push_back(r.x);
        us.push_back(r.u);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end()), us.end());
    if (rows.size() != xs.size() * us.size())
        fail(ErrorKind::validation_error, path.string() + ": rows do not form a full (x, u) grid");
    std::vector<double> f(rows.size()), fu(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (const Row& r : rows) {
        const auto i = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), r.x) - xs.begin());
        const auto j = static_cast<std::size_t>(std::lower_bound(us.begin(), us.end(), r.u) - us.begin());
        const std::size_t k = i * us.size() + j;
        if (seen[k]) fail(ErrorKind::validation_error, path.string() + ": duplicate (x, u) row");
        seen[k] = true;
        f[k] = r.f;
        fu[k] = r.fu;
    }
    return Nonlinearity::tabulated(xs, us, f, fu);
}

}  // namespace

Medium build_medium(const ExperimentConfig& c) {
    const MediumDecl& m = c.medium;
    DiffusionField d = m.periods.size() == 2
                           ? DiffusionField::diagonal(series_function(m.a11), series_function(m.a22))
                           : DiffusionField::scalar(series_function(m.a11));
    Nonlinearity f = m.reaction == "tabulated" ? read_table(c.base_dir / m.table)
                                               : Nonlinearity::kpp_logistic(series_function(m.mu));
    return Medium(std::move(d), std::move(f), m.periods, m.time_period);
}

Grid cell_grid(const ExperimentConfig& c) {
    std::vector<int> cells(c.medium.periods.size(), c.grid.cells);
    return Grid::periodic(c.medium.periods, cells);
}

DispersionSettings dispersion_settings(const ExperimentConfig& c) {
    DispersionSettings s;
    s.lambda_lo = c.solver.lambda_lo;
    s.lambda_hi = c.solver.lambda_hi;
    s.scan_points = c.solver.scan_points;
    s.workers = static_cast<unsigned>(c.workers);
    s.eigen.tolerance = c.solver.eigen_tolerance;
    s.eigen.residual_gate = c.solver.residual_gate;
    s.eigen.max_iterations = static_cast<std::size_t>(c.solver.max_iterations);
    s.floquet_dt = c.solver.floquet_dt;
    return s;
}

WaveSettings wave_settings(const ExperimentConfig& c) {
    WaveSettings w;
    w.cells = c.grid.cells;
    w.window_periods = c.grid.window_periods;
    w.front_at = c.wave.front_at;
    w.trigger = c.wave.trigger;
    w.dt = c.solver.dt;
    w.t_end = c.wave.t_end;
    w.record_dt = c.wave.record_dt;
    w.level = c.wave.level;
    w.pulsating_from = c.wave.pulsating_from;
    w.eps_fraction = c.wave.eps_fraction;
    w.transverse_half_width = c.grid.transverse_half_width;
    w.fit_far_field = c.wave.fit_far_field;
    w.dispersion = dispersion_settings(c);
    return w;
}

}  // namespace pulsewave
