#include "pulsewave/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "pulsewave/parallel.hpp"

namespace pulsewave {

namespace {

namespace fs = std::filesystem;

// rule text only; values themselves are printed at full precision
std::string short_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

struct SpeedCase {
    double c = 0.0;
    bool critical = false;
    std::string label;  // "values[0]", "factors[1]", "critical"
};

class Pipeline {
public:
    Pipeline(const ExperimentConfig& config, fs::path out, std::ostream& log)
        : cfg_(config), out_(std::move(out)), log_(log), medium_(build_medium(config)), cell_(cell_grid(config)),
          ds_(dispersion_settings(config)), ws_(wave_settings(config)) {}

    int run(const std::string& sub) {
        fs::create_directories(out_);
        write("effective_config.json", dump_json(effective_config(cfg_)));
        if (sub == "validate") {
            validate();
        } else if (sub == "eigen") {
            eigen();
        } else if (sub == "dispersion") {
            dispersion();
        } else if (sub == "speed") {
            speed();
        } else if (sub == "wave") {
            waves();
        } else if (sub == "stability") {
            stability();
        } else if (sub == "uniqueness") {
            uniqueness();
        } else if (sub == "full") {
            validate();
            speed();
            waves();
            stability();
            uniqueness();
        } else {
            fail(ErrorKind::invalid_argument, "unknown subcommand " + sub);
        }
        const bool ok = std::all_of(gates_.begin(), gates_.end(), [](const ordered_json& g) { return g["pass"].get<bool>(); });
        const int code = ok ? exit_ok : exit_gate;
        write_manifest(sub, code);
        for (const auto& g : gates_)
            log_ << (g["pass"].get<bool>() ? "PASS " : "FAIL ") << g["name"].get<std::string>() << "\n";
        return code;
    }

    void write_manifest(const std::string& sub, int code) {
        ordered_json m = {{"subcommand", sub}, {"exit_code", code}, {"files", files_}, {"gates", gates_}};
        std::ofstream(out_ / "manifest.json", std::ios::binary) << dump_json(m);
    }

private:
    const ExperimentConfig& cfg_;
    fs::path out_;
    std::ostream& log_;
    Medium medium_;
    Grid cell_;
    DispersionSettings ds_;
    WaveSettings ws_;
    std::optional<SteadyState> steady_;
    std::optional<double> mubar_;
    std::optional<DispersionCurve> curve_;
    std::vector<SpeedCase> speeds_;
    std::map<std::size_t, RootPair> roots_;
    std::map<std::size_t, WaveRecord> waves_;
    std::vector<std::string> files_;
    ordered_json gates_ = ordered_json::array();
    std::mutex write_mutex_;

    using clock = std::chrono::steady_clock;

    void note(const std::string& what, clock::time_point start) {
        const double s = std::chrono::duration<double>(clock::now() - start).count();
        log_ << what << " (" << std::fixed;
        log_.precision(1);
        log_ << s << " s)\n";
        log_.unsetf(std::ios::floatfield);
        log_.flush();
    }

    void write(const std::string& name, const std::string& text) {
        std::lock_guard lock(write_mutex_);
        std::ofstream f(out_ / name, std::ios::binary);
        f << text;
        if (!f) fail(ErrorKind::invalid_argument, "cannot write " + (out_ / name).string());
        if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
    }

    ordered_json gate(const std::string& name, bool pass, double value, const std::string& rule) {
        ordered_json g = {{"name", name}, {"value", value}, {"rule", rule}, {"pass", pass}};
        gates_.push_back(g);
        return g;
    }

    const SteadyState& steady() {
        if (!steady_) {
            const auto t0 = clock::now();
            SteadySettings s;
            s.tolerance = cfg_.solver.steady_tolerance;
            steady_ = steady_state(medium_, cell_, s);
            mubar_ = stability_of_p(medium_, *steady_);
            note("steady state", t0);
        }
        return *steady_;
    }

    double mubar() {
        steady();
        return *mubar_;
    }

    const DispersionCurve& curve() {
        if (!curve_) {
            const auto t0 = clock::now();
            curve_ = minimal_speed(medium_, cell_, ds_);
            note("dispersion curve", t0);
        }
        return *curve_;
    }

    const std::vector<SpeedCase>& speed_cases() {
        if (speeds_.empty()) {
            const double cs = curve().c_star;
            for (std::size_t i = 0; i < cfg_.speeds.speeds.size(); ++i)
                speeds_.push_back({cfg_.speeds.speeds[i], false, "values[" + std::to_string(i) + "]"});
            for (std::size_t i = 0; i < cfg_.speeds.factors.size(); ++i) {
                const double f = cfg_.speeds.factors[i];
                speeds_.push_back({f == 1.0 ? cs : f * cs, f == 1.0, "factors[" + std::to_string(i) + "]"});
            }
            if (cfg_.speeds.critical) speeds_.push_back({cs, true, "critical"});
            for (auto& s : speeds_)
                if (std::abs(s.c - cs) <= 1e-8) {
                    s.c = cs;
                    s.critical = true;
                }
            if (speeds_.empty()) fail(ErrorKind::invalid_argument, "the speed list is empty");
        }
        return speeds_;
    }

    const RootPair& roots(std::size_t k) {
        auto it = roots_.find(k);
        if (it == roots_.end()) it = roots_.emplace(k, lambda_roots(medium_, cell_, speed_cases()[k].c, curve(), ds_)).first;
        return it->second;
    }

    void validate() {
        const auto t0 = clock::now();
        const int per = cfg_.solver.samples_per_period;
        ordered_json j;
        j["dimension"] = medium_.dimension();
        j["time_dependent"] = medium_.time_dependent();
        j["samples_per_period"] = per;
        j["ellipticity_min"] = validate_ellipticity(medium_, per);
        const double M = check_bound_M(medium_, 1e3, 1.0 / 64.0, per);
        j["bound_M"] = M;
        std::vector<double> us;
        for (int k = 1; k <= 128; ++k) us.push_back(M * k / 128.0);
        const SampleSet samples = sample_medium(medium_, per);
        const SublinearityReport sub = check_sublinearity(medium_, us, samples);
        ordered_json witness = nullptr;
        if (sub.witness)
            witness = {{"x", {sub.witness->x[0], sub.witness->x[1]}},
                       {"t", sub.witness->t},
                       {"s", sub.witness->s},
                       {"s_next", sub.witness->s_next}};
        j["sublinearity"] = {{"holds", sub.holds}, {"witness", witness}};
        const bool cond_c = check_condition_C(medium_, us, samples.points, samples.times);
        j["condition_C"] = cond_c;
        const double excess = derivative_excess(medium_, us, samples);
        j["derivative_excess"] = excess;
        gate("validate.sublinearity", sub.holds, sub.holds ? 1.0 : 0.0, "f(x,s)/s non-increasing");
        gate("validate.condition_C", cond_c, cond_c ? 1.0 : 0.0, "f_u <= f/u, strict somewhere");
        gate("validate.derivative_excess", excess <= 1e-10, excess, "<= 1e-10");

        if (medium_.time_dependent()) {
            const double T = *medium_.time_period();
            const double dt = cfg_.solver.floquet_dt.value_or(T / 1024.0);
            const FloquetResult fr = principal_eig_floquet(medium_, cell_, 0.0, 0.0, dt, ds_.eigen);
            j["mu1"] = fr.growth_exponent;
            j["steady"] = nullptr;
            j["steady_skipped"] = "time-periodic media: the periodic state is an orbit, not a fixed point";
            gate("validate.mu1", fr.growth_exponent > 0.0, fr.growth_exponent, "> 0");
        } else {
            std::vector<double> slope0(cell_.size());
            for (std::size_t i = 0; i < cell_.size(); ++i) slope0[i] = medium_.f_u(cell_.coordinate(i), 0.0);
            const double mu1 = principal_eig(assemble_divergence(cell_, medium_).plus_diagonal(slope0), ds_.eigen).eigenvalue;
            if (!(mu1 > 0.0)) {
                j["mu1"] = mu1;
                j["steady"] = nullptr;
                j["steady_skipped"] = "zero state is not linearly unstable";
                gate("validate.mu1", false, mu1, "> 0");
                write("validate.json", dump_json(j));
                return;
            }
            const SteadyState& s = steady();
            j["mu1"] = s.mu1;
            const auto [lo, hi] = std::minmax_element(s.p.values.begin(), s.p.values.end());
            j["steady"] = {{"residual", s.residual},
                           {"uniqueness_witness", s.uniqueness_witness},
                           {"p_min", *lo},
                           {"p_max", *hi},
                           {"mubar1", mubar()}};
            gate("validate.mu1", s.mu1 > 0.0, s.mu1, "> 0");
            gate("validate.mubar1", mubar() < 0.0, mubar(), "< 0");
            gate("validate.steady_residual", s.residual <= 1e-8, s.residual, "<= 1e-8");
            gate("validate.steady_uniqueness", s.uniqueness_witness < 1e-8, s.uniqueness_witness, "< 1e-8");
            std::ostringstream csv;
            csv << "x,p\n";
            write_profile(csv, s.p);
            write("steady_state.csv", csv.str());
        }
        write("validate.json", dump_json(j));
        note("validate", t0);
    }

    static void write_profile(std::ostream& csv, const Field& f) {
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const Point x = f.grid.coordinate(i);
            csv << format_number(x[0]);
            if (f.grid.dimension() == 2) csv << "," << format_number(x[1]);
            csv << "," << format_number(f.values[i]) << "\n";
        }
    }

    void eigen() {
        const auto t0 = clock::now();
        const double lambda = cfg_.eigen.lambda, c = cfg_.eigen.c;
        ordered_json j = {{"lambda", lambda}, {"c", c}};
        std::vector<double> v;
        if (medium_.time_dependent()) {
            const double T = *medium_.time_period();
            const double dt = cfg_.solver.floquet_dt.value_or(T / 1024.0);
            const FloquetResult fr = principal_eig_floquet(medium_, cell_, lambda, c, dt, ds_.eigen);
            j["method"] = "floquet";
            j["eigenvalue"] = fr.eigenvalue;
            j["growth_exponent"] = fr.growth_exponent;
            j["spectral_radius"] = fr.spectral_radius;
            j["iterations"] = fr.iterations;
            j["dt"] = dt;
            v = fr.eigenfunction;
        } else {
            const EigenResult er = principal_eig(assemble_twisted(cell_, medium_, lambda, c), ds_.eigen);
            j["method"] = "inverse_iteration";
            j["eigenvalue"] = er.eigenvalue;
            j["residual"] = er.residual;
            j["iterations"] = er.iterations;
            gate("eigen.residual", er.residual <= cfg_.solver.residual_gate, er.residual,
                 "<= " + short_number(cfg_.solver.residual_gate));
            v = er.eigenfunction;
        }
        std::ostringstream csv;
        write_eigenfunction_csv(csv, cell_, v);
        write("eigenfunction.csv", csv.str());
        write("eigen.json", dump_json(j));
        note("eigen", t0);
    }

    void dispersion() {
        const DispersionCurve& dc = curve();
        std::ostringstream csv;
        csv << "lambda,mu0,c_of_lambda\n";
        for (std::size_t i = 0; i < dc.lambda.size(); ++i)
            csv << format_number(dc.lambda[i]) << "," << format_number(dc.mu0[i]) << ","
                << format_number(dc.c_of_lambda[i]) << "\n";
        write("dispersion.csv", csv.str());
        ordered_json j = {{"c_star", dc.c_star},
                          {"lambda_star", dc.lambda_star},
                          {"lambda_lo", dc.lambda_lo},
                          {"lambda_hi", dc.lambda_hi},
                          {"samples", dc.lambda.size()},
                          {"residuals", {{"max", dc.max_residual}, {"gate", cfg_.solver.residual_gate}}}};
        write("dispersion.json", dump_json(j));
        if (!medium_.time_dependent())
            gate("dispersion.residual", dc.max_residual <= cfg_.solver.residual_gate, dc.max_residual,
                 "<= " + short_number(cfg_.solver.residual_gate));
    }

    void speed() {
        dispersion();
        const auto t0 = clock::now();
        const DispersionCurve& dc = curve();
        ordered_json list = ordered_json::array();
        const auto& cases = speed_cases();
        for (std::size_t k = 0; k < cases.size(); ++k) {
            ordered_json e = {{"label", cases[k].label}, {"c", cases[k].c}, {"critical", cases[k].critical}};
            if (cases[k].critical) {
                e["lambda1"] = dc.lambda_star;
                e["lambda2"] = dc.lambda_star;
            } else {
                const RootPair& r = roots(k);
                e["lambda1"] = r.lambda1;
                e["lambda2"] = r.lambda2;
                e["mu_mid"] = r.mu_mid;
            }
            list.push_back(e);
        }
        ordered_json j = {{"c_star", dc.c_star}, {"lambda_star", dc.lambda_star}, {"speeds", list}};
        write("speed.json", dump_json(j));
        note("speed", t0);
    }

    double sup_p() {
        const auto& v = steady().p.values;
        return *std::max_element(v.begin(), v.end());
    }

    void waves() {
        const auto& cases = speed_cases();
        steady();
        curve();
        std::vector<std::size_t> todo;
        for (std::size_t k = 0; k < cases.size(); ++k)
            if (!waves_.count(k)) todo.push_back(k);
        std::vector<WaveRecord> built(todo.size());
        const auto t0 = clock::now();
        parallel_for(todo.size(), static_cast<unsigned>(cfg_.workers), [&](std::size_t i) {
            built[i] = construct_wave(medium_, *steady_, cases[todo[i]].c, *curve_, ws_);
        });
        note("waves (" + std::to_string(todo.size()) + ")", t0);
        for (std::size_t i = 0; i < todo.size(); ++i) {
            waves_[todo[i]] = std::move(built[i]);
            wave_artifacts(todo[i]);
        }
    }

    void wave_artifacts(std::size_t k) {
        const WaveRecord& w = waves_.at(k);
        const std::string stem = "wave_" + std::to_string(k);
        const Field& f = w.profile;
        const double L = medium_.period(0);
        std::ostringstream prof;
        prof << (f.grid.dimension() == 2 ? "xi,x_mod_L,x2,w\n" : "xi,x_mod_L,w\n");
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const Point x = f.grid.coordinate(i);
            const double xm = x[0] - L * std::floor(x[0] / L);
            prof << format_number(x[0] + w.c_meas * f.t) << "," << format_number(xm) << ",";
            if (f.grid.dimension() == 2) prof << format_number(x[1]) << ",";
            prof << format_number(f.values[i]) << "\n";
        }
        write(stem + "_profile.csv", prof.str());
        std::ostringstream front;
        front << "t,X\n";
        for (std::size_t i = 0; i < w.t.size(); ++i) front << format_number(w.t[i]) << "," << format_number(w.X[i]) << "\n";
        write(stem + "_front.csv", front.str());

        const std::string name = "wave[" + std::to_string(k) + "]";
        const double speed_err = std::abs(w.c_meas - w.c_target) / w.c_target;
        const double res_rel = w.pulsating_residual / sup_p();
        ordered_json j = {{"label", speed_cases()[k].label},
                          {"c_target", w.c_target},
                          {"c_meas", w.c_meas},
                          {"critical", w.critical},
                          {"lambda", w.lambda},
                          {"pulsating_residual", w.pulsating_residual},
                          {"xi0", w.xi0},
                          {"B", w.fit ? ordered_json(w.fit->B) : ordered_json(nullptr)},
                          {"lambda_fit", w.fit ? ordered_json(w.fit->lambda_fit) : ordered_json(nullptr)},
                          {"dt", w.dt},
                          {"t_end", f.t},
                          {"recenters", w.trajectory.recenters.size()}};
        ordered_json g = ordered_json::array();
        g.push_back(gate(name + ".speed", speed_err <= 0.02, speed_err, "|c_meas - c|/c <= 0.02"));
        g.push_back(gate(name + ".pulsating", res_rel <= 1e-2, res_rel, "residual / sup p <= 1e-2"));
        if (w.fit) {
            const double tol = w.critical ? 0.10 : 0.05;
            const double err = std::abs(w.fit->lambda_fit - w.lambda) / w.lambda;
            g.push_back(gate(name + ".lambda_fit", err <= tol, err, "relative error <= " + short_number(tol)));
        }
        j["gates"] = g;
        write(stem + ".json", dump_json(j));
    }

    double weight_lambda(std::size_t k) {
        if (cfg_.stability.weight_lambda) return *cfg_.stability.weight_lambda;
        if (speed_cases()[k].critical) return curve().lambda_star;
        const RootPair& r = roots(k);
        return 0.5 * (r.lambda1 + r.lambda2);
    }

    void stability() {
        waves();
        const auto& cases = speed_cases();
        struct Cell {
            std::size_t k, p;
        };
        std::vector<Cell> grid;
        for (std::size_t k = 0; k < cases.size(); ++k)
            for (std::size_t p = 0; p < cfg_.perturbations.size(); ++p) grid.push_back({k, p});
        std::vector<double> lambdas(cases.size());
        for (std::size_t k = 0; k < cases.size(); ++k) lambdas[k] = weight_lambda(k);
        std::vector<StabilitySeries> series(grid.size());
        const auto t0 = clock::now();
        parallel_for(grid.size(), static_cast<unsigned>(cfg_.workers), [&](std::size_t i) {
            const Cell& c = grid[i];
            const double t_end = cases[c.k].critical ? cfg_.stability.critical_t_end : cfg_.stability.t_end;
            series[i] = stability_run(medium_, waves_.at(c.k), cfg_.perturbations[c.p], t_end,
                                      cfg_.stability.record_dt, lambdas[c.k]);
        });
        note("stability runs (" + std::to_string(grid.size()) + ")", t0);
        for (std::size_t i = 0; i < grid.size(); ++i) stability_artifacts(grid[i].k, grid[i].p, series[i]);
    }

    void stability_artifacts(std::size_t k, std::size_t p, const StabilitySeries& s) {
        const std::string stem = "stability_" + std::to_string(k) + "_" + std::to_string(p);
        const std::string name = "stability[" + std::to_string(k) + "," + std::to_string(p) + "]";
        std::ostringstream csv;
        csv << "t,E_left,E_right,E_global\n";
        for (std::size_t i = 0; i < s.t.size(); ++i)
            csv << format_number(s.t[i]) << "," << format_number(s.E_left[i]) << "," << format_number(s.E_right[i])
                << "," << format_number(s.E_global[i]) << "\n";
        write(stem + ".csv", csv.str());

        const SpeedCase& sc = speed_cases()[k];
        const PerturbationSpec& pert = cfg_.perturbations[p];
        const int n = medium_.dimension();
        ordered_json j = {{"label", sc.label},
                          {"c", sc.c},
                          {"critical", sc.critical},
                          {"perturbation", p},
                          {"weight_lambda", s.weight_lambda},
                          {"xi0", s.xi0},
                          {"l1_certificate", s.l1_certificate},
                          {"clamped", s.clamped},
                          {"min_gap", s.min_gap}};
        ordered_json g = ordered_json::array();

        const auto [elo, ehi] = tail_window(s.t, cfg_.stability.fit_fraction);
        std::optional<RateFit> ef, af;
        std::string degenerate;
        try {
            ef = fit_exponential(s.t, s.E_global, elo, ehi);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::degenerate_series) throw;
            degenerate = e.what();
        }
        const double alo = sc.critical ? cfg_.stability.algebraic_lo : std::max(10.0, elo);
        const double ahi = sc.critical ? cfg_.stability.algebraic_hi : ehi;
        try {
            af = fit_algebraic(s.t, s.E_global, alo, ahi);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::degenerate_series) throw;
            degenerate = e.what();
        }
        j["mu_fit"] = ef ? ordered_json(ef->value) : ordered_json(nullptr);
        j["slope_fit"] = af ? ordered_json(af->value) : ordered_json(nullptr);
        j["r2"] = {{"exponential", ef ? ordered_json(ef->r2) : ordered_json(nullptr)},
                   {"algebraic", af ? ordered_json(af->r2) : ordered_json(nullptr)}};
        j["windows"] = {{"exponential", {elo, ehi}}, {"algebraic", {alo, ahi}}};
        if (!degenerate.empty()) j["degenerate"] = degenerate;

        std::string verdict = "undetermined";
        if (ef && af)
            verdict = ef->r2 >= af->r2 ? "exponential" : "algebraic";
        else if (ef)
            verdict = "exponential";
        else if (af)
            verdict = "algebraic";
        j["verdict"] = verdict;

        if (sc.critical) {
            const bool dec = decreasing_on(s.t, s.E_global, alo, ahi);
            j["prediction"] = {{"rate", 0.0}, {"slope", -0.5 * n}};
            j["decreasing"] = dec;
            const BoundFit b = upper_bound_fit(s.t, s.E_global, 0.0, n, alo, ahi);
            j["bound"] = {{"C", b.C}, {"excursion", b.excursion}};
            const double limit = -0.3 * n;
            g.push_back(gate(name + ".slope", af && af->value <= limit, af ? af->value : NAN,
                             "slope <= " + short_number(limit)));
            g.push_back(gate(name + ".monotone", dec, dec ? 1.0 : 0.0, "E decreasing on the algebraic window"));
        } else {
            const RatePrediction pr = rate_prediction(medium_, cell_, sc.c, s.weight_lambda, mubar(), curve(), ds_);
            j["prediction"] = {{"rate", pr.rate},
                               {"mu_c", pr.mu_c},
                               {"half_mubar", pr.half_mubar},
                               {"best_rate", pr.best_rate},
                               {"best_lambda", pr.best_lambda}};
            const BoundFit b = upper_bound_fit(s.t, s.E_global, pr.rate, 0, elo, ehi);
            j["bound"] = {{"C", b.C}, {"excursion", b.excursion}};
            if (pr.rate > 1e-3) {
                const double floor = 0.8 * pr.rate;
                g.push_back(gate(name + ".mu_fit", ef && ef->value >= floor, ef ? ef->value : NAN,
                                 "mu_fit >= " + short_number(floor)));
                g.push_back(gate(name + ".r2", ef && ef->r2 >= 0.99, ef ? ef->r2 : NAN, "R^2 >= 0.99"));
            }
        }
        if (pert.sign == PerturbationSign::positive)  // q0 >= r0 must persist
            g.push_back(gate(name + ".ordering", s.min_gap >= -1e-12, s.min_gap, "min (q - r) >= -1e-12"));
        j["gates"] = g;
        write(stem + ".json", dump_json(j));
    }

    void uniqueness() {
        const auto& cases = speed_cases();
        double c = 0.0;
        if (cfg_.uniqueness.speed) {
            c = *cfg_.uniqueness.speed;
        } else {
            for (const auto& s : cases)
                if (!s.critical) {
                    c = s.c;
                    break;
                }
            if (c == 0.0) fail(ErrorKind::invalid_argument, "uniqueness needs a supercritical speed");
        }
        const auto t0 = clock::now();
        const UniquenessResult u = uniqueness_experiment(medium_, steady(), c, curve(), cfg_.uniqueness.first,
                                                         cfg_.uniqueness.second, cfg_.uniqueness.t_end, ws_);
        note("uniqueness", t0);
        const double shift_err = std::abs(u.shift - u.expected_shift);
        ordered_json g = ordered_json::array();
        g.push_back(gate("uniqueness.distance", u.distance <= 1e-2, u.distance, "aligned sup distance <= 1e-2"));
        g.push_back(gate("uniqueness.shift", shift_err <= u.spacing, shift_err, "|shift - expected| <= h"));
        ordered_json j = {{"c", c},
                          {"t_end", u.t_end},
                          {"shift", u.shift},
                          {"expected_shift", u.expected_shift},
                          {"distance", u.distance},
                          {"unaligned_distance", u.unaligned_distance},
                          {"spacing", u.spacing},
                          {"c_meas", u.c_meas},
                          {"gates", g}};
        write("uniqueness.json", dump_json(j));
    }
};

}  // namespace

int exit_code_for(ErrorKind kind) {
    return kind == ErrorKind::parse_error || kind == ErrorKind::validation_error ? exit_config : exit_numerical;
}

int report_error(const std::filesystem::path& out_dir, ErrorKind kind, const std::string& message) {
    const ordered_json j = {{"error", std::string(to_string(kind))}, {"message", message}};
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!ec) std::ofstream(out_dir / "error.json", std::ios::binary) << dump_json(j);
    return exit_code_for(kind);
}

int run(const std::string& subcommand, const ExperimentConfig& config, const std::filesystem::path& out_dir,
        std::ostream& log) {
    try {
        Pipeline p(config, out_dir, log);
        return p.run(subcommand);
    } catch (const Error& e) {
        log << e.what() << "\n";
        return report_error(out_dir, e.kind(), e.what());
    } catch (const std::exception& e) {
        log << "SolverFailure: " << e.what() << "\n";
        return report_error(out_dir, ErrorKind::solver_failure, e.what());
    }
}

}  // namespace pulsewave
