// Command-line driver for the Riccati diffusion laboratory.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "riccati/config.hpp"
#include "riccati/experiments.hpp"

namespace {

using riccati::lab::Config;
using riccati::lab::Experiment;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitConfig = 3;

void print_usage() {
    std::printf(
        "%s — numerical laboratory for one-dimensional Riccati diffusions\n"
        "\n"
        "usage:\n"
        "  riccati-lab list                       enumerate the experiments\n"
        "  riccati-lab help <experiment>          show claim and default configuration\n"
        "  riccati-lab run <experiment> [options] run one experiment\n"
        "  riccati-lab validate --config FILE     diagnose a configuration file\n"
        "\n"
        "run options:\n"
        "  --config FILE   layer a key=value config file over the defaults\n"
        "  --out DIR       output directory (default out/<experiment>)\n"
        "  --seed N        master seed (default 42)\n"
        "  --set KEY=VAL   override one config entry (repeatable)\n"
        "\n"
        "Each run writes its CSV/SVG outputs plus a manifest.json recording the\n"
        "configuration, seed, and per-check verdicts. Exit codes: 0 all checks\n"
        "passed, 1 a check failed or the run aborted, 2 unknown experiment or\n"
        "usage error, 3 configuration error.\n"
        "\n"
        "Set RICCATI_LAB_THREADS to cap the worker-thread count (default: all\n"
        "hardware threads).\n",
        riccati::lab::version_string().c_str());
}

int cmd_list() {
    std::size_t width = 0;
    for (const auto& e : riccati::lab::experiment_catalog())
        width = std::max(width, e.name.size());
    for (const auto& e : riccati::lab::experiment_catalog())
        std::printf("%-*s  %s\n", static_cast<int>(width), e.name.c_str(), e.summary.c_str());
    return kExitOk;
}

int cmd_help(const std::string& name) {
    const Experiment* exp = riccati::lab::find_experiment(name);
    if (!exp) {
        std::fprintf(stderr, "unknown experiment '%s' (see riccati-lab list)\n", name.c_str());
        return kExitUnknown;
    }
    std::printf("%s\n  %s\n\nclaim:\n  %s\n\ndefaults:\n", exp->name.c_str(),
                exp->summary.c_str(), exp->claim.c_str());
    for (const auto& [k, v] : exp->defaults.entries())
        std::printf("  %s = %s\n", k.c_str(), v.c_str());
    return kExitOk;
}

// Returns the number of diagnostics that are hard errors.
int print_diagnostics(const std::vector<std::string>& notes) {
    int errors = 0;
    for (const auto& n : notes) {
        std::fprintf(stderr, "%s\n", n.c_str());
        if (n.rfind("error:", 0) == 0) ++errors;
    }
    return errors;
}

int cmd_validate(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[++i];
        else {
            std::fprintf(stderr, "validate: unexpected argument '%s'\n", args[i].c_str());
            return kExitUnknown;
        }
    }
    if (path.empty()) {
        std::fprintf(stderr, "validate: --config FILE is required\n");
        return kExitUnknown;
    }
    Config cfg;
    try {
        cfg = riccati::lab::parse_config_file(path);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitConfig;
    }
    const int errors = print_diagnostics(riccati::lab::config_diagnostics(cfg));
    if (errors > 0) return kExitConfig;
    std::printf("%s: %zu entries, no errors\n", path.c_str(), cfg.entries().size());
    return kExitOk;
}

int cmd_run(const std::vector<std::string>& args) {
    if (args.empty()) {
        std::fprintf(stderr, "run: experiment name is required (see riccati-lab list)\n");
        return kExitUnknown;
    }
    const std::string name = args[0];
    const Experiment* exp = riccati::lab::find_experiment(name);
    if (!exp) {
        std::fprintf(stderr, "unknown experiment '%s'; known experiments:\n", name.c_str());
        for (const auto& e : riccati::lab::experiment_catalog())
            std::fprintf(stderr, "  %s\n", e.name.c_str());
        return kExitUnknown;
    }

    Config user;
    std::string out_dir = "out/" + name;
    try {
        for (std::size_t i = 1; i < args.size(); ++i) {
            const std::string& a = args[i];
            if (a == "--config" && i + 1 < args.size())
                user = riccati::lab::parse_config_file(args[++i]);
            else if (a == "--out" && i + 1 < args.size())
                out_dir = args[++i];
            else if (a == "--seed" && i + 1 < args.size())
                user.set("seed", args[++i]);
            else if (a == "--set" && i + 1 < args.size())
                riccati::lab::apply_override(user, args[++i]);
            else {
                std::fprintf(stderr, "run: unexpected argument '%s'\n", a.c_str());
                return kExitUnknown;
            }
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitConfig;
    }
    if (print_diagnostics(riccati::lab::config_diagnostics(user)) > 0) return kExitConfig;

    riccati::lab::ExperimentResult res;
    try {
        res = riccati::lab::run_experiment(*exp, user, out_dir);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitCheckFailed;
    }

    for (const auto& o : res.outputs)
        std::printf("wrote %s/%s (%s)\n", out_dir.c_str(), o.file.c_str(), o.columns.c_str());
    int failed = 0;
    for (const auto& chk : res.checks) {
        std::printf("[%s] %s — %s\n", chk.passed ? "PASS" : "FAIL", chk.name.c_str(),
                    chk.detail.c_str());
        if (!chk.passed) ++failed;
    }
    if (failed == 0) {
        std::printf("%s: all %zu checks passed\n", name.c_str(), res.checks.size());
        return kExitOk;
    }
    std::printf("%s: %d of %zu checks FAILED\n", name.c_str(), failed, res.checks.size());
    return kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        print_usage();
        return kExitUnknown;
    }
    const std::string cmd = args[0];
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (cmd == "list") return cmd_list();
    if (cmd == "help") {
        if (rest.empty()) {
            print_usage();
            return kExitOk;
        }
        return cmd_help(rest[0]);
    }
    if (cmd == "run") return cmd_run(rest);
    if (cmd == "validate") return cmd_validate(rest);
    if (cmd == "--help" || cmd == "-h") {
        print_usage();
        return kExitOk;
    }
    std::fprintf(stderr, "unknown command '%s'\n", cmd.c_str());
    print_usage();
    return kExitUnknown;
}
