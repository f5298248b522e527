#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pulsewave/experiments.hpp"

namespace pulsewave {

using ordered_json = nlohmann::ordered_json;

struct SeriesDecl {
    double constant = 1.0;
    std::vector<FourierTerm> terms;
};

struct MediumDecl {
    std::vector<double> periods{1.0};
    std::optional<double> time_period;
    SeriesDecl a11;
    SeriesDecl a22;                      // two-dimensional media only
    std::string reaction = "kpp_logistic";  // or "tabulated"
    SeriesDecl mu;
    std::string table;  // CSV "x,u,f,f_u", relative to the config file
};

struct GridDecl {
    int cells = 256;
    double window_periods = 40.0;
    double transverse_half_width = 20.0;
};

struct SolverDecl {
    double eigen_tolerance = 1e-10;
    double residual_gate = 1e-9;
    long max_iterations = 100000;
    double steady_tolerance = 1e-10;
    std::optional<double> dt;  // empty = min(budget, h)
    double lambda_lo = 0.05;
    double lambda_hi = 8.0;
    int scan_points = 64;
    std::optional<double> floquet_dt;  // empty = T/1024
    int samples_per_period = 64;
};

struct SpeedDecl {
    std::vector<double> speeds;               // absolute
    std::vector<double> factors{1.25};        // multiples of c*
    bool critical = false;                    // add c = c*
};

struct WaveDecl {
    double t_end = 60.0;
    double record_dt = 0.125;
    double level = 0.5;
    double pulsating_from = 50.0;
    double eps_fraction = 0.05;
    double front_at = 0.75;
    double trigger = 0.625;
    bool fit_far_field = true;
};

struct StabilityDecl {
    double t_end = 40.0;
    double critical_t_end = 200.0;
    double record_dt = 0.25;
    double fit_fraction = 0.6;
    double algebraic_lo = 20.0;
    double algebraic_hi = 200.0;
    std::optional<double> weight_lambda;  // empty = midpoint of [λ1, λ2]
};

struct UniquenessDecl {
    std::optional<double> speed;  // empty = first supercritical speed
    double t_end = 60.0;
    SeedSpec first{0.0, 1.0};
    SeedSpec second{0.0, 2.0};
};

struct EigenDecl {
    double lambda = 0.0;
    double c = 0.0;
};

struct ExperimentConfig {
    MediumDecl medium;
    GridDecl grid;
    SolverDecl solver;
    SpeedDecl speeds;
    WaveDecl wave;
    std::vector<PerturbationSpec> perturbations{PerturbationSpec{}};
    std::vector<bool> perturbation_seeded;  // true where the seed was given explicitly
    StabilityDecl stability;
    UniquenessDecl uniqueness;
    EigenDecl eigen;
    std::string output = "out";
    std::uint64_t seed = 1;
    int workers = 1;
    std::filesystem::path base_dir;  // directory of the config file
};

/// Parses and validates a configuration. ParseError carries line and column;
/// ValidationError lists every violation found.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Applies --seed: perturbations without an explicit seed follow the global one.
void set_seed(ExperimentConfig& config, std::uint64_t seed);

/// Effective configuration with every default filled in.
ordered_json effective_config(const ExperimentConfig& config);

Medium build_medium(const ExperimentConfig& config);
Grid cell_grid(const ExperimentConfig& config);
DispersionSettings dispersion_settings(const ExperimentConfig& config);
WaveSettings wave_settings(const ExperimentConfig& config);

/// JSON text with doubles at 17 significant digits, two-space indent, LF.
std::string dump_json(const ordered_json& value);

/// Shortest-free fixed format for CSV cells: %.17g.
std::string format_number(double v);

}  // namespace pulsewave
