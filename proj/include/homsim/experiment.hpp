#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "homsim/interferogram.hpp"
#include "homsim/montecarlo.hpp"

namespace homsim {

/// Invalid or inconsistent configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentMode {
    AnalyticDip,
    AnalyticPeak,
    WcsDip,
    WcsPeak,
    HbtScan,
    Fit,
};

std::string to_string(ExperimentMode mode);

/// Fully resolved run description. All times are seconds, all angular
/// frequencies rad/s; frequency fields expressed in "MHz as printed" are
/// rejected at parse time rather than guessed at.
struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::AnalyticDip;

    // packet / coherence envelope
    double sigma = 0.5e-6;
    double delta_rel = 0.0;

    // source
    double mu = 0.05;
    bool phase_randomized = true;
    double fixed_phase = 0.0;

    // detectors by role (signal covers both scan detectors)
    DetectorModel det_signal{};
    DetectorModel det_herald{};

    // delay grid (resolved to explicit taus)
    std::vector<double> taus;

    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    bool normalize = false;  // analytic scans only

    // fit mode
    std::string fit_input;
    ScanKind fit_sign = ScanKind::Dip;

    // output
    std::string out_dir = ".";
    std::string basename = "run";
    bool plot = false;

    void validate() const;  // throws ConfigError; warns on stderr for mu > 0.2
};

/// Parse and validate a config document. Unknown keys are errors (this is
/// what rejects the MHz-style convenience fields with a pointed message).
ExperimentConfig parse_config(const std::string& json_text);

/// Canonical JSON echo of a resolved config; parse_config(echo) round-trips.
std::string resolved_config_json(const ExperimentConfig& cfg);

struct RunResult {
    std::vector<std::string> files_written;
};

/// Execute the configured experiment and write its artifacts (CSV + JSON,
/// SVG when plot is set) under out_dir. Throws ConfigError for config
/// problems and std::runtime_error for I/O failures.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Bundled recipe table (embedded copies of the recipes/ directory).
std::vector<std::string> recipe_names();
const char* recipe_json(const std::string& name);  // throws ConfigError
const char* recipe_description(const std::string& name);

}  // namespace homsim
