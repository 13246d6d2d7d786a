#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bandqfi/integrate.hpp"

namespace bandqfi {

// Parsed batch-run description: one command per process. Built from a JSON
// config file and/or command-line flags (flags override file fields).
struct RunConfig {
    std::string command;          // sweep | fit | rg-check | invariants | figure1 | models
    std::string model_id = "linearized:p=1";
    std::vector<double> velocities;   // empty = unit velocities
    double cutoff = 1.0;
    double lambda_c = 0.0;
    double extra_band_gap = 0.0;      // 0 = no extra band
    double extra_band_coupling = 0.0;
    double m_ref = 0.1;               // model construction point
    double m_min = 1e-4;
    double m_max = 1e-2;
    int points_per_decade = 16;
    double diff_ratio = 0.1;          // differencing ratio for fit/rg output
    double rg_b = 2.0;                // rg-check rescaling factor
    double rg_m = 1e-4;
    QuadratureConfig quad;
    std::string output_dir = ".";     // BANDQFI_OUTPUT_DIR overrides the default
    std::string input_csv;            // fit: read this sweep instead of running one
    unsigned seed = 12345;            // randomized diagnostics only
    int grid_n = 256;                 // invariant grids

    void validate() const;            // throws std::invalid_argument
};

// Loads defaults, then the JSON file at `path` (optional, "" = none).
RunConfig load_config(const std::string& path);

// Builds the ModelSpec named by cfg.model_id with cfg's parameters applied.
ModelSpec model_from_config(const RunConfig& cfg);

// Executes one command; writes artifacts under cfg.output_dir and a short
// human summary to `out`. Returns the process exit code contract:
//   0 success, 1 config error, 2 numerical failure, 3 at-criticality request.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace bandqfi
