// gbfi: config-driven front end for the path-space verification library.
//   simulate  sample process paths and dump them as CSV files
//   verify    run verification suites and write a JSON report
//   feynman   evaluate the functional integral attached to a config
//
// Exit codes: 0 success / all checks pass, 1 runtime failure or check
// failure, 2 config parse or validation error.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gbfi/config.hpp"

namespace {

using namespace gbfi;

std::uint64_t parse_env_seed(const char* text) {
    errno = 0;
    char* end = nullptr;
    unsigned long long value = std::strtoull(text, &end, 10);
    if (errno != 0 || end == text || *end != '\0' || std::strchr(text, '-') != nullptr)
        throw ConfigError(std::string("config: GBFI_SEED: not a valid seed: '") + text + "'");
    return value;
}

// --seed-override beats GBFI_SEED beats the config value.
void resolve_seed(ExperimentConfig& config, const std::optional<std::uint64_t>& flag) {
    if (flag) {
        config.seed = *flag;
        return;
    }
    if (const char* env = std::getenv("GBFI_SEED"))
        config.seed = parse_env_seed(env);
}

int cmd_simulate(const ExperimentConfig& config, const std::string& out_dir) {
    BuiltExperiment experiment = BuiltExperiment::build(config);
    std::filesystem::create_directories(out_dir);
    char block[64];
    for (std::size_t i = 0; i < config.n_samples; ++i) {
        // stream 2i mirrors the first-path streams of the verifier batches
        SamplePath path = sample_path_increments(experiment.space, {config.seed, 2 * i});
        std::snprintf(block, sizeof block, "path_%06zu.csv", i);
        std::filesystem::path file = std::filesystem::path(out_dir) / block;
        std::ofstream out(file);
        if (!out)
            throw Error("cannot write " + file.string());
        out << "t,x\n";
        for (std::size_t j = 0; j < path.values.size(); ++j) {
            std::snprintf(block, sizeof block, "%.17g,%.17g\n", path.grid.node(static_cast<int>(j)),
                          path.values[j]);
            out << block;
        }
    }
    return 0;
}

int cmd_verify(const ExperimentConfig& config, const std::string& out_path,
               const std::string& suite, int threads) {
    BuiltExperiment experiment = BuiltExperiment::build(config);
    std::vector<std::string> suites;
    if (!suite.empty())
        suites = {suite};
    else if (!config.suites.empty())
        suites = config.suites;
    else
        suites = {"all"};

    RunReport report = run_suites(experiment, suites, threads);

    for (const CheckRecord& check : report.checks) {
        const Json& body = check.body;
        if (body["kind"] == "stat")
            std::fprintf(stderr, "[%s] %s  z=%.3f (z_max %.2f)%s\n",
                         check.pass ? "PASS" : "FAIL",
                         body["name"].get<std::string>().c_str(), body["z"].get<double>(),
                         body["z_max"].get<double>(),
                         body["retried"].get<bool>() ? " [retried]" : "");
        else
            std::fprintf(stderr, "[%s] %s  rel_err=%.3e (tol %.1e)\n",
                         check.pass ? "PASS" : "FAIL",
                         body["name"].get<std::string>().c_str(), body["rel_err"].get<double>(),
                         body["tolerance"].get<double>());
    }
    std::fprintf(stderr, "overall: %s (%zu checks, %.1f ms)\n",
                 report.overall_pass ? "PASS" : "FAIL", report.checks.size(),
                 report.wall_time_ms);

    std::string text = report.to_json().dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw Error("cannot write " + out_path);
        out << text;
    }
    return report.overall_pass ? 0 : 1;
}

int cmd_feynman(const ExperimentConfig& config) {
    BuiltExperiment experiment = BuiltExperiment::build(config);
    Complex value =
        feynman_integral(experiment.measure, experiment.ops, config.params, experiment.space);
    double q0 =
        std::min(std::abs(config.params.q1), std::abs(config.params.q2));
    ClassReport bounds = class_report(experiment.measure, q0, experiment.ops, experiment.space);
    std::printf("%.12f %c %.12fi\n", value.real(), value.imag() < 0.0 ? '-' : '+',
                std::abs(value.imag()));
    std::printf("F_bound <= %.12g\n", bounds.f_bound);
    std::printf("G_bound <= %.12g\n", bounds.g_bound);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"path-space functional integrals over scaled Gaussian processes"};
    app.require_subcommand(1);

    std::string config_path, out_path, suite;
    std::optional<std::uint64_t> seed_override;
    int threads = 0;

    CLI::App* simulate = app.add_subcommand("simulate", "sample paths and dump them as CSV");
    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    CLI::App* feynman = app.add_subcommand("feynman", "evaluate the functional integral");
    for (CLI::App* cmd : {simulate, verify, feynman}) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--seed-override", seed_override, "replace the config seed");
        cmd->add_option("--threads", threads, "worker threads (0: automatic)");
    }
    simulate->add_option("--out", out_path, "output directory for path CSVs")->required();
    verify->add_option("--out", out_path, "report file (default: stdout)");
    verify->add_option("--suite", suite,
                       "suite to run (translation, parts, parts-scaled, continuation, "
                       "cs-feynman, final-display, all); default: config suites or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig config = ExperimentConfig::from_file(config_path);
        resolve_seed(config, seed_override);
        if (simulate->parsed())
            return cmd_simulate(config, out_path);
        if (verify->parsed())
            return cmd_verify(config, out_path, suite, threads);
        return cmd_feynman(config);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InvalidParameter& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
