#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "pulsewave/config.hpp"
#include "pulsewave/errors.hpp"

namespace pulsewave {

enum ExitCode { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_gate = 4 };

/// 2 for ParseError / ValidationError, 3 for everything else.
int exit_code_for(ErrorKind kind);

/// Subcommands: validate, eigen, dispersion, speed, wave, stability,
/// uniqueness, full. Writes CSV/JSON artifacts, the effective config and a
/// manifest into `out_dir`; on failure writes error.json. Progress lines go
/// to `log`. Returns the exit code.
int run(const std::string& subcommand, const ExperimentConfig& config, const std::filesystem::path& out_dir,
        std::ostream& log);

/// Writes error.json {error, message} into `out_dir` (best effort) and returns the exit code.
int report_error(const std::filesystem::path& out_dir, ErrorKind kind, const std::string& message);

}  // namespace pulsewave
