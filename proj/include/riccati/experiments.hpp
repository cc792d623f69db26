#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "riccati/config.hpp"

namespace riccati::lab {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct OutputFile {
    std::string file;     // path relative to the output directory
    std::string columns;  // documented column schema
};

struct ExperimentResult {
    std::string name;
    std::vector<CheckResult> checks;
    std::vector<OutputFile> outputs;
    bool all_passed() const;
};

// A named experiment: a one-line summary for the catalog listing, the claim
// it demonstrates (recorded in the manifest), its default configuration, and
// the runner. Runners read every tunable from the merged configuration, so
// reruns with identical inputs are byte-identical except the manifest
// timestamp.
struct Experiment {
    std::string name;
    std::string summary;
    std::string claim;
    Config defaults;
    std::function<ExperimentResult(const Config&, const std::string& out_dir)> run;
};

const std::vector<Experiment>& experiment_catalog();
const Experiment* find_experiment(const std::string& name);

// Per-experiment seed stream derived from the master seed and the name.
std::uint64_t experiment_seed(std::uint64_t master, const std::string& name);

// Overlays the user configuration onto the experiment defaults, creates
// out_dir, runs the experiment, and writes <out_dir>/manifest.json recording
// configuration, outputs, and per-check pass/fail.
ExperimentResult run_experiment(const Experiment& exp, const Config& user,
                                const std::string& out_dir);

// Value diagnostics for a standalone configuration ("error: ..." lines make
// the configuration unusable, "warning: ..." lines flag analytically
// unavailable requests such as ill-founded bracket orders).
std::vector<std::string> config_diagnostics(const Config& cfg);

std::string version_string();

}  // namespace riccati::lab
