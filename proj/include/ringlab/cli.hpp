#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ringlab/serialize.hpp"

namespace ringlab {

struct MpSettings {
    std::string mode = "max"; ///< max, min or both
    int levels = 20;
    int pairs_per_level = 200;
    int refine_top = 50;
    int boundary_refine_top = 10;
    std::optional<double> cap;
};

struct CmySettings {
    int levels = 41;
    int points_per_level = 256;
    bool exploratory = false;
    std::optional<double> localized_eps; ///< also run the capped two-point search with a = boundary min
};

struct RrSettings {
    int samples = 200;
    int radii = 6;               ///< safe radius times 2^-k, k = 0..radii-1
    double harmonicity_step = 1e-3;
    int harmonicity_points = 5;
};

struct PsiCheckSettings {
    std::optional<double> t_max; ///< default: squared cap, else squared diameter
    int samples = 1001;
};

struct Tolerances {
    double strict = 1e-7;
    double tie = 1e-9;
    double cmy = 1e-4;
    double rr_exponent = 2.9;
    double rr_pass_rate = 0.95;
    double rr_residual = 1e-12;
    double harmonicity = 1e-5;
    double rotation = 1e-10;
};

/// Parsed scenario file plus command-line overrides.
struct RunConfig {
    Json domain;
    Json solver;
    Json psi;
    MpSettings mp;
    CmySettings cmy;
    RrSettings rr;
    PsiCheckSettings psi_check;
    Tolerances tolerances;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "out";
    std::string dump_field;
    std::string load_field;
};

/// Validates a scenario document; missing sections take defaults. Throws ConfigError.
RunConfig parse_config(const Json& doc);

/// Fully resolved configuration, embedded in every report.
Json to_json(const RunConfig& config);

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_violation = 2 };

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"solve", "psi-check", "check-mp", "check-cmy", "rr-verify", "report"};
    return names;
}

/// Runs one subcommand, writes <out_dir>/<name>.json (and CSV artifacts) and returns the exit code.
/// Errors are caught and written as a structured record.
int run(const RunConfig& config, const std::string& subcommand, std::ostream& log);

} // namespace ringlab
