// Python bindings for the config-driven core operations. Configs and reports
// cross the boundary as JSON text so the wrapper package stays free of
// binary-level type coupling; the pure-python layer turns them into dicts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gbfi/config.hpp"

namespace py = pybind11;
using namespace gbfi;

namespace {

ExperimentConfig parse_config(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return ExperimentConfig::from_json(doc);
}

BuiltExperiment build_config(const std::string& text) {
    return BuiltExperiment::build(parse_config(text));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Core operations on path-space functional integrals, driven by JSON configs";

    // base first, so the more specific translator registered after it wins
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("version", [] { return std::string(kVersionString); });

    m.def(
        "config_hash", [](const std::string& text) { return parse_config(text).hash(); },
        py::arg("config_json"), "Content hash of the normalized config.");

    m.def(
        "normalized_config_json",
        [](const std::string& text) { return parse_config(text).to_json().dump(2); },
        py::arg("config_json"), "Echo the config with every default materialized.");

    m.def(
        "run_verification_json",
        [](const std::string& text, std::vector<std::string> suites, int threads,
           py::object seed_override) {
            ExperimentConfig config = parse_config(text);
            if (!seed_override.is_none())
                config.seed = seed_override.cast<std::uint64_t>();
            BuiltExperiment experiment = BuiltExperiment::build(config);
            if (suites.empty())
                suites = config.suites.empty() ? std::vector<std::string>{"all"} : config.suites;
            return run_suites(experiment, suites, threads).to_json().dump(2);
        },
        py::arg("config_json"), py::arg("suites") = std::vector<std::string>{},
        py::arg("threads") = 0, py::arg("seed_override") = py::none(),
        "Run verification suites and return the report as JSON text.");

    m.def(
        "feynman_value",
        [](const std::string& text) {
            BuiltExperiment ex = build_config(text);
            return feynman_integral(ex.measure, ex.ops, ex.config.params, ex.space);
        },
        py::arg("config_json"), "Analytic functional integral at the config's q.");

    m.def(
        "analytic_j",
        [](const std::string& text, std::complex<double> lambda1, std::complex<double> lambda2) {
            BuiltExperiment ex = build_config(text);
            return analytic_J(ex.measure, ex.ops, lambda1, lambda2, ex.space);
        },
        py::arg("config_json"), py::arg("lambda1"), py::arg("lambda2"),
        "Scaled-expectation closed form J(lambda) for the configured measure.");

    m.def(
        "class_bounds",
        [](const std::string& text) {
            BuiltExperiment ex = build_config(text);
            double q0 = std::min(std::abs(ex.config.params.q1), std::abs(ex.config.params.q2));
            ClassReport report = class_report(ex.measure, q0, ex.ops, ex.space);
            return std::make_pair(report.f_bound, report.g_bound);
        },
        py::arg("config_json"),
        "Dominating bounds (functional, first variation) at q0 = min(|q1|, |q2|).");

    m.def(
        "sample_path",
        [](const std::string& text, std::uint64_t draw) {
            BuiltExperiment ex = build_config(text);
            SamplePath path = sample_path_increments(ex.space, {ex.config.seed, 2 * draw});
            std::vector<double> times(path.values.size());
            for (std::size_t j = 0; j < times.size(); ++j)
                times[j] = path.grid.node(static_cast<int>(j));
            return std::make_pair(std::move(times), std::move(path.values));
        },
        py::arg("config_json"), py::arg("draw") = 0,
        "One simulated trajectory as (times, values); draw k uses the same "
        "stream as the CLI's k-th CSV dump.");
}
