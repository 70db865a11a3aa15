#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vvlab/ns_disk.hpp"
#include "vvlab/prop51.hpp"
#include "vvlab/rates.hpp"

namespace vvlab {

/// Raised on malformed configs; the CLI maps it to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Flat key-value experiment description (one experiment per file,
/// '#' comments, "key = value" lines).
struct ExperimentConfig {
    std::string kind;
    std::string flow;
    std::string shape = "disk";
    double ellipse_a = 1.0, ellipse_b = 0.5;
    double theta = 1.0;
    std::vector<double> R_grid;
    std::vector<double> nu_grid;
    std::vector<double> nu_marginal_grid;
    double nu_marginal_R_factor = 3.0;
    double T = 1.0;
    double resolution_scale = 1.0;
    int base_nodes = 1024;
    int steps = 512;
    int jobs = 1;
    unsigned long long seed = 1;
    std::string out = "results";

    std::map<std::string, std::string> raw;  // echoed into the manifest

    static ExperimentConfig parse_file(const std::filesystem::path& path);
    static ExperimentConfig parse_text(const std::string& text);
    void validate() const;  // throws ConfigError with the offending key
};

const std::vector<std::string>& experiment_kinds();

/// Outcome of a run: the manifest JSON text (deterministic), CSV payloads
/// keyed by filename, the aggregate verdict and a human log.
struct RunManifest {
    std::string json;                       // manifest.json content
    std::map<std::string, std::string> csv; // filename -> content
    bool pass = false;
    std::string log;                        // timings etc.; never in the manifest
};

RunManifest run(const ExperimentConfig& config);

/// Write manifest + CSVs under config.out (created if needed).
std::vector<std::filesystem::path> write_outputs(const RunManifest& manifest,
                                                 const ExperimentConfig& config);

/// Per-fit two-column log-log series with fitted-line header plus long-form
/// surface tables, extracted from a manifest.json. Returns written paths;
/// empty manifest sections are skipped with a notice in `notice`.
std::vector<std::filesystem::path> emit_plotdata(const std::filesystem::path& manifest_path,
                                                 const std::filesystem::path& out_dir,
                                                 std::string* notice = nullptr);

}  // namespace vvlab
