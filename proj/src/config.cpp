#include "gbfi/config.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <variant>

namespace gbfi {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config: " + field + ": " + what);
}

const Json& need(const Json& doc, const char* key, const std::string& field) {
    auto it = doc.find(key);
    if (it == doc.end())
        fail(field, std::string("missing required key '") + key + "'");
    return *it;
}

double as_number(const Json& value, const std::string& field) {
    if (!value.is_number())
        fail(field, "expected a number");
    double x = value.get<double>();
    if (!std::isfinite(x))
        fail(field, "expected a finite number");
    return x;
}

double get_number(const Json& doc, const char* key, const std::string& field) {
    return as_number(need(doc, key, field), field + "." + key);
}

Complex as_complex(const Json& value, const std::string& field) {
    if (!value.is_array() || value.size() != 2)
        fail(field, "expected [re, im]");
    return {as_number(value[0], field), as_number(value[1], field)};
}

void reject_unknown_keys(const Json& doc, std::initializer_list<const char*> known,
                         const std::string& field) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || it.key() == k;
        if (!ok)
            fail(field, "unknown key '" + it.key() + "'");
    }
}

// ---- function specs ------------------------------------------------------

Json normalize_function_spec(const Json& spec, const std::string& field) {
    if (!spec.is_object())
        fail(field, "expected an object {\"family\": ...}");
    std::string family = need(spec, "family", field).is_string()
                             ? need(spec, "family", field).get<std::string>()
                             : (fail(field + ".family", "expected a string"), "");
    Json out;
    out["family"] = family;
    if (family == "zero") {
        reject_unknown_keys(spec, {"family"}, field);
    } else if (family == "constant") {
        reject_unknown_keys(spec, {"family", "value"}, field);
        out["value"] = get_number(spec, "value", field);
    } else if (family == "linear") {
        reject_unknown_keys(spec, {"family", "slope"}, field);
        out["slope"] = get_number(spec, "slope", field);
    } else if (family == "polynomial") {
        reject_unknown_keys(spec, {"family", "coeffs"}, field);
        const Json& coeffs = need(spec, "coeffs", field);
        if (!coeffs.is_array() || coeffs.empty())
            fail(field + ".coeffs", "expected a nonempty array of numbers");
        Json normalized = Json::array();
        for (const Json& c : coeffs)
            normalized.push_back(as_number(c, field + ".coeffs"));
        out["coeffs"] = std::move(normalized);
    } else if (family == "sine" || family == "sine_b_ratio") {
        reject_unknown_keys(spec, {"family", "amplitude", "frequency"}, field);
        out["amplitude"] = get_number(spec, "amplitude", field);
        out["frequency"] = get_number(spec, "frequency", field);
    } else {
        fail(field, "unknown function family '" + family + "'");
    }
    return out;
}

// Builds a normalized spec. sine_b_ratio needs the clock b; passing nullptr
// marks positions where self-reference would be circular.
ParametricFunction build_function(const Json& spec, const ParametricFunction* b, double horizon,
                                  const std::string& field) {
    const std::string family = spec["family"].get<std::string>();
    if (family == "zero")
        return ParametricFunction::zero();
    if (family == "constant")
        return ParametricFunction::constant(spec["value"].get<double>());
    if (family == "linear")
        return ParametricFunction::linear(spec["slope"].get<double>());
    if (family == "polynomial")
        return ParametricFunction::polynomial(spec["coeffs"].get<std::vector<double>>());
    if (family == "sine")
        return ParametricFunction::scaled_sine(spec["amplitude"].get<double>(),
                                               spec["frequency"].get<double>());
    if (family == "sine_b_ratio") {
        if (b == nullptr)
            fail(field, "sine_b_ratio cannot be used here (needs the variance clock)");
        return ParametricFunction::scaled_sine_b_ratio(
            spec["amplitude"].get<double>(), spec["frequency"].get<double>(), *b, horizon);
    }
    fail(field, "unknown function family '" + family + "'");
}

Json normalize_operator_spec(const Json& spec) {
    if (!spec.is_object())
        fail("operator", "expected an object");
    std::string kind = need(spec, "kind", "operator").get<std::string>();
    Json out;
    out["kind"] = kind;
    if (kind == "theta") {
        reject_unknown_keys(spec, {"kind", "vartheta"}, "operator");
        const Json& vt = need(spec, "vartheta", "operator");
        if (vt.is_string()) {
            std::string name = vt.get<std::string>();
            if (name != "b" && name != "negative_b" && name != "sine")
                fail("operator.vartheta", "expected \"b\", \"negative_b\", \"sine\", or a spec");
            out["vartheta"] = name;
        } else {
            out["vartheta"] = normalize_function_spec(vt, "operator.vartheta");
        }
    } else if (kind == "pair") {
        reject_unknown_keys(spec, {"kind", "first", "second"}, "operator");
        for (const char* key : {"first", "second"}) {
            std::string which = need(spec, key, "operator").get<std::string>();
            if (which != "identity" && which != "zero")
                fail(std::string("operator.") + key, "expected \"identity\" or \"zero\"");
            out[key] = which;
        }
    } else {
        fail("operator.kind", "expected \"theta\" or \"pair\"");
    }
    return out;
}

const std::vector<std::string> kSuiteNames = {"translation",  "parts",      "parts-scaled",
                                              "continuation", "cs-feynman", "final-display"};

bool known_suite(const std::string& name) {
    if (name == "all")
        return true;
    for (const std::string& s : kSuiteNames)
        if (s == name)
            return true;
    return false;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
    if (!doc.is_object())
        throw ConfigError("config: top level must be an object");
    reject_unknown_keys(doc,
                        {"mean", "variance", "horizon", "grid_cells", "atoms", "operator",
                         "directions", "q", "lambdas", "rho", "n_samples", "seed", "tolerances",
                         "suites"},
                        "top level");

    ExperimentConfig config;
    config.mean_spec = doc.contains("mean") ? normalize_function_spec(doc["mean"], "mean")
                                            : Json{{"family", "zero"}};
    config.variance_spec = normalize_function_spec(need(doc, "variance", "top level"), "variance");

    if (doc.contains("horizon"))
        config.horizon = as_number(doc["horizon"], "horizon");
    if (!(config.horizon > 0.0))
        fail("horizon", "must be positive");

    if (doc.contains("grid_cells")) {
        if (!doc["grid_cells"].is_number_integer())
            fail("grid_cells", "expected an integer");
        config.grid_cells = doc["grid_cells"].get<int>();
    }
    if (config.grid_cells < 2)
        fail("grid_cells", "need at least 2 cells");

    const Json& atoms = need(doc, "atoms", "top level");
    if (!atoms.is_array() || atoms.empty())
        fail("atoms", "expected a nonempty array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        std::string field = "atoms[" + std::to_string(i) + "]";
        const Json& atom = atoms[i];
        if (!atom.is_object())
            fail(field, "expected an object");
        reject_unknown_keys(atom, {"weight", "density"}, field);
        AtomSpec spec;
        spec.weight = as_complex(need(atom, "weight", field), field + ".weight");
        spec.density = normalize_function_spec(need(atom, "density", field), field + ".density");
        config.atoms.push_back(std::move(spec));
    }

    config.operator_spec = doc.contains("operator")
                               ? normalize_operator_spec(doc["operator"])
                               : Json{{"kind", "pair"}, {"first", "identity"}, {"second", "zero"}};

    Json zero_spec{{"family", "zero"}};
    Json g1 = zero_spec, g2 = zero_spec;
    if (doc.contains("directions")) {
        const Json& dirs = doc["directions"];
        if (!dirs.is_object())
            fail("directions", "expected an object");
        reject_unknown_keys(dirs, {"g", "g1", "g2"}, "directions");
        if (dirs.contains("g"))
            g1 = g2 = normalize_function_spec(dirs["g"], "directions.g");
        if (dirs.contains("g1"))
            g1 = normalize_function_spec(dirs["g1"], "directions.g1");
        if (dirs.contains("g2"))
            g2 = normalize_function_spec(dirs["g2"], "directions.g2");
    }
    config.directions_spec = Json{{"g1", std::move(g1)}, {"g2", std::move(g2)}};

    if (doc.contains("q")) {
        const Json& q = doc["q"];
        if (!q.is_array() || q.size() != 2)
            fail("q", "expected [q1, q2]");
        config.params.q1 = as_number(q[0], "q[0]");
        config.params.q2 = as_number(q[1], "q[1]");
    }
    if (config.params.q1 == 0.0 || config.params.q2 == 0.0)
        fail("q", "entries must be nonzero");

    config.lambdas = {{1.0, 1.0}, {2.0, 2.0}, {4.0, 4.0}};
    if (doc.contains("lambdas")) {
        const Json& ls = doc["lambdas"];
        if (!ls.is_array() || ls.empty())
            fail("lambdas", "expected a nonempty array of [l1, l2] pairs");
        config.lambdas.clear();
        for (std::size_t i = 0; i < ls.size(); ++i) {
            std::string field = "lambdas[" + std::to_string(i) + "]";
            if (!ls[i].is_array() || ls[i].size() != 2)
                fail(field, "expected [l1, l2]");
            double l1 = as_number(ls[i][0], field);
            double l2 = as_number(ls[i][1], field);
            if (!(l1 > 0.0) || !(l2 > 0.0))
                fail(field, "entries must be positive");
            config.lambdas.emplace_back(l1, l2);
        }
    }

    if (doc.contains("rho")) {
        const Json& rho = doc["rho"];
        if (!rho.is_array() || rho.size() != 2)
            fail("rho", "expected [rho1, rho2]");
        config.rho.first = as_number(rho[0], "rho[0]");
        config.rho.second = as_number(rho[1], "rho[1]");
        if (!(config.rho.first > 0.0) || !(config.rho.second > 0.0))
            fail("rho", "entries must be positive");
    }

    if (doc.contains("n_samples")) {
        if (!doc["n_samples"].is_number_integer())
            fail("n_samples", "expected an integer");
        std::int64_t n = doc["n_samples"].get<std::int64_t>();
        if (n < 1)
            fail("n_samples", "must be at least 1");
        config.n_samples = static_cast<std::size_t>(n);
    }

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned())
            fail("seed", "expected a nonnegative integer");
        config.seed = doc["seed"].get<std::uint64_t>();
    }

    if (doc.contains("tolerances")) {
        const Json& tol = doc["tolerances"];
        if (!tol.is_object())
            fail("tolerances", "expected an object");
        reject_unknown_keys(tol, {"rel_tol", "z_max"}, "tolerances");
        if (tol.contains("rel_tol"))
            config.rel_tol = as_number(tol["rel_tol"], "tolerances.rel_tol");
        if (tol.contains("z_max"))
            config.z_max = as_number(tol["z_max"], "tolerances.z_max");
    }
    if (!(config.rel_tol > 0.0))
        fail("tolerances.rel_tol", "must be positive");
    if (!(config.z_max > 0.0))
        fail("tolerances.z_max", "must be positive");

    if (doc.contains("suites")) {
        const Json& suites = doc["suites"];
        if (!suites.is_array())
            fail("suites", "expected an array of suite names");
        for (const Json& s : suites) {
            if (!s.is_string() || !known_suite(s.get<std::string>()))
                fail("suites", "unknown suite " + s.dump());
            config.suites.push_back(s.get<std::string>());
        }
    }
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    return from_json(doc);
}

Json ExperimentConfig::to_json() const {
    Json doc;
    doc["mean"] = mean_spec;
    doc["variance"] = variance_spec;
    doc["horizon"] = horizon;
    doc["grid_cells"] = grid_cells;
    Json atom_list = Json::array();
    for (const AtomSpec& atom : atoms) {
        Json entry;
        entry["weight"] = Json::array({atom.weight.real(), atom.weight.imag()});
        entry["density"] = atom.density;
        atom_list.push_back(std::move(entry));
    }
    doc["atoms"] = std::move(atom_list);
    doc["operator"] = operator_spec;
    doc["directions"] = directions_spec;
    doc["q"] = Json::array({params.q1, params.q2});
    Json lambda_list = Json::array();
    for (const auto& [l1, l2] : lambdas)
        lambda_list.push_back(Json::array({l1, l2}));
    doc["lambdas"] = std::move(lambda_list);
    doc["rho"] = Json::array({rho.first, rho.second});
    doc["n_samples"] = n_samples;
    doc["seed"] = seed;
    doc["tolerances"] = Json{{"rel_tol", rel_tol}, {"z_max", z_max}};
    if (!suites.empty())
        doc["suites"] = suites;
    return doc;
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = fnv1a64(to_json().dump());
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
    return buf;
}

BuiltExperiment BuiltExperiment::build(const ExperimentConfig& config) {
    ParametricFunction mean_fn = [&] {
        try {
            return build_function(config.mean_spec, nullptr, config.horizon, "mean");
        } catch (const Error& e) {
            fail("mean", e.what());
        }
    }();
    ParametricFunction variance_fn = [&] {
        try {
            return build_function(config.variance_spec, nullptr, config.horizon, "variance");
        } catch (const Error& e) {
            fail("variance", e.what());
        }
    }();

    auto space = [&] {
        try {
            return FunctionSpace({mean_fn, variance_fn},
                                 TimeGrid::uniform(config.horizon, config.grid_cells));
        } catch (const NonMonotoneVariance& e) {
            fail("variance", e.what());
        } catch (const Error& e) {
            fail("mean/variance/grid", e.what());
        }
    }();
    double b_total = space.b_total();

    DiscreteMeasure measure;
    for (std::size_t i = 0; i < config.atoms.size(); ++i) {
        std::string field = "atoms[" + std::to_string(i) + "].density";
        try {
            measure.atoms.push_back(
                {config.atoms[i].weight,
                 HPrimeElement{
                     build_function(config.atoms[i].density, &variance_fn, config.horizon, field)}});
        } catch (const Error& e) {
            fail(field, e.what());
        }
    }

    std::optional<ThetaOperator> theta;
    std::string family;
    OperatorPair ops = OperatorPair::identity_zero();
    const Json& op = config.operator_spec;
    if (op["kind"] == "theta") {
        ParametricFunction vt = [&]() -> ParametricFunction {
            const Json& spec = op["vartheta"];
            if (spec.is_string()) {
                family = spec.get<std::string>();
                if (family == "b")
                    return variance_fn;
                if (family == "negative_b")
                    return ParametricFunction::scaled(-1.0, variance_fn);
                // half-period profile sin(pi b(t) / b(T))
                return ParametricFunction::scaled_sine_b_ratio(1.0, std::numbers::pi, variance_fn,
                                                               config.horizon);
            }
            family = "custom";
            return build_function(spec, &variance_fn, config.horizon, "operator.vartheta");
        }();
        try {
            theta = ThetaOperator::from_element(
                HPrimeElement{ParametricFunction::density_of(std::move(vt), variance_fn)});
        } catch (const Error& e) {
            fail("operator.vartheta", e.what());
        }
        ops = OperatorPair::from_theta(*theta);
    } else {
        auto factor = [](const Json& which) {
            return which == "identity" ? OperatorFactorization::identity()
                                       : OperatorFactorization::zero();
        };
        ops = OperatorPair{factor(op["first"]), factor(op["second"])};
    }

    DirectionPair dirs{
        HPrimeElement{build_function(config.directions_spec["g1"], &variance_fn, config.horizon,
                                     "directions.g1")},
        HPrimeElement{build_function(config.directions_spec["g2"], &variance_fn, config.horizon,
                                     "directions.g2")}};

    return BuiltExperiment{config,
                           std::move(mean_fn),
                           std::move(variance_fn),
                           b_total,
                           std::move(space),
                           std::move(measure),
                           std::move(ops),
                           std::move(theta),
                           std::move(family),
                           std::move(dirs)};
}

Json identity_to_json(const IdentityReport& report) {
    Json body;
    body["kind"] = "identity";
    body["name"] = report.name;
    body["lhs"] = Json::array({report.lhs.real(), report.lhs.imag()});
    body["rhs"] = Json::array({report.rhs.real(), report.rhs.imag()});
    body["abs_err"] = report.abs_err;
    body["rel_err"] = report.rel_err;
    body["tolerance"] = report.tolerance;
    body["pass"] = report.pass;
    if (!report.details.empty()) {
        Json details;
        for (const auto& [key, value] : report.details)
            details[key] = value;
        body["details"] = std::move(details);
    }
    return body;
}

Json stat_to_json(const StatReport& report) {
    Json body;
    body["kind"] = "stat";
    body["name"] = report.name;
    body["mean"] = Json::array({report.estimate.mean.real(), report.estimate.mean.imag()});
    body["reference"] = Json::array({report.reference.real(), report.reference.imag()});
    body["stderr"] = Json::array({report.estimate.stderr_re, report.estimate.stderr_im});
    body["n"] = report.estimate.n;
    body["seed"] = report.estimate.seed;
    body["z"] = report.z;
    body["z_max"] = report.z_max;
    body["retried"] = report.retried;
    body["pass"] = report.pass;
    return body;
}

Json RunReport::to_json() const {
    Json doc;
    doc["version"] = version;
    doc["config_hash"] = config_hash;
    doc["wall_time_ms"] = wall_time_ms;
    doc["overall_pass"] = overall_pass;
    Json list = Json::array();
    for (const CheckRecord& check : checks)
        list.push_back(check.body);
    doc["checks"] = std::move(list);
    doc["config"] = config_echo;
    return doc;
}

const std::vector<std::string>& all_suite_names() { return kSuiteNames; }

namespace {

constexpr std::uint64_t kRetrySalt = 0x9E3779B97F4A7C15ull;

using SuiteItem = std::variant<IdentityReport, StatReport>;

struct SuiteRun {
    std::vector<SuiteItem> items;
    // index into items -> how to redo that statistical check with a new seed
    std::vector<std::pair<std::size_t, std::function<StatReport(std::uint64_t)>>> regens;

    void add(IdentityReport report) { items.push_back(std::move(report)); }
    void add(StatReport report, std::function<StatReport(std::uint64_t)> regen) {
        regens.emplace_back(items.size(), std::move(regen));
        items.push_back(std::move(report));
    }
};

// One reseeded second chance per suite: only when exactly one statistical
// check failed and did so marginally (z within 25% of the gate).
void apply_retry_policy(SuiteRun& run, std::uint64_t suite_seed) {
    std::size_t failing = 0;
    std::size_t which = 0;
    for (const auto& [index, regen] : run.regens) {
        const auto& report = std::get<StatReport>(run.items[index]);
        if (!report.pass) {
            ++failing;
            which = index;
        }
    }
    if (failing != 1)
        return;
    const auto& failed = std::get<StatReport>(run.items[which]);
    if (!(failed.z <= 1.25 * failed.z_max))
        return;
    for (const auto& [index, regen] : run.regens) {
        if (index != which)
            continue;
        StatReport redo = regen(suite_seed ^ kRetrySalt);
        redo.retried = true;
        run.items[which] = std::move(redo);
        return;
    }
}

SuiteRun run_one_suite(const BuiltExperiment& ex, const std::string& name, int threads) {
    const ExperimentConfig& cfg = ex.config;
    const std::uint64_t suite_seed = cfg.seed ^ fnv1a64(name);
    const bool statistical = name == "translation" || name == "parts" || name == "parts-scaled" ||
                             name == "continuation";
    if (statistical && cfg.n_samples < 100)
        fail("n_samples", "statistical suites need at least 100 draws");
    BatchOptions batch{cfg.n_samples, suite_seed, threads};

    SuiteRun run;
    if (name == "translation") {
        auto redo = [&ex, cfg, threads](std::uint64_t seed) {
            return verify_translation(ex.measure, ex.ops, ex.dirs.g1, ex.space,
                                      {cfg.n_samples, seed, threads}, cfg.z_max, cfg.rel_tol)
                .stat;
        };
        VerifierResult result = verify_translation(ex.measure, ex.ops, ex.dirs.g1, ex.space, batch,
                                                   cfg.z_max, cfg.rel_tol);
        run.add(std::move(result.stat), redo);
        run.add(std::move(result.closed_form));
    } else if (name == "parts") {
        auto redo = [&ex, cfg, threads](std::uint64_t seed) {
            return verify_parts_basic(ex.measure, ex.ops, ex.dirs, ex.space,
                                      {cfg.n_samples, seed, threads}, cfg.z_max, cfg.rel_tol)
                .stat;
        };
        VerifierResult result = verify_parts_basic(ex.measure, ex.ops, ex.dirs, ex.space, batch,
                                                   cfg.z_max, cfg.rel_tol);
        run.add(std::move(result.stat), redo);
        run.add(std::move(result.closed_form));
    } else if (name == "parts-scaled") {
        auto redo = [&ex, cfg, threads](std::uint64_t seed) {
            return verify_parts_scaled(ex.measure, ex.ops, ex.dirs, cfg.rho.first, cfg.rho.second,
                                       ex.space, {cfg.n_samples, seed, threads}, cfg.z_max,
                                       cfg.rel_tol)
                .stat;
        };
        VerifierResult result =
            verify_parts_scaled(ex.measure, ex.ops, ex.dirs, cfg.rho.first, cfg.rho.second,
                                ex.space, batch, cfg.z_max, cfg.rel_tol);
        run.add(std::move(result.stat), redo);
        run.add(std::move(result.closed_form));
    } else if (name == "continuation") {
        ContinuationResult result = verify_continuation(ex.measure, ex.ops, cfg.params,
                                                        cfg.lambdas, ex.space, batch, cfg.z_max);
        for (std::size_t i = 0; i < result.lambda_checks.size(); ++i) {
            auto lambda = cfg.lambdas[i];
            auto redo = [&ex, cfg, threads, lambda](std::uint64_t seed) {
                return verify_continuation(ex.measure, ex.ops, cfg.params, {lambda}, ex.space,
                                           {cfg.n_samples, seed, threads}, cfg.z_max)
                    .lambda_checks.front();
            };
            run.add(std::move(result.lambda_checks[i]), redo);
        }
        run.add(std::move(result.ray_check));
    } else if (name == "cs-feynman") {
        run.add(verify_cs_feynman(ex.measure, ex.ops, ex.dirs, cfg.params, ex.space, cfg.rel_tol));
    } else if (name == "final-display") {
        if (!ex.theta)
            fail("operator", "the final-display suite needs a vartheta operator");
        run.add(verify_final_display(ex.measure, *ex.theta, ex.dirs.g1, ex.space, cfg.rel_tol));
        if (ex.vartheta_family == "b" || ex.vartheta_family == "negative_b") {
            run.add(operator_structure_check(ex));
            run.add(step2_explicit(ex.measure, ex.dirs.g1, ex.space,
                                   ex.vartheta_family == "b" ? 1 : 2, cfg.rel_tol));
        } else if (ex.vartheta_family == "sine") {
            for (IdentityReport& report : sine_display_checks(ex, cfg.rel_tol))
                run.add(std::move(report));
        }
    } else {
        fail("suites", "unknown suite '" + name + "'");
    }

    apply_retry_policy(run, suite_seed);
    return run;
}

} // namespace

RunReport run_suites(const BuiltExperiment& experiment, const std::vector<std::string>& suites,
                     int threads) {
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::string> expanded;
    auto push_unique = [&expanded](const std::string& name) {
        for (const std::string& have : expanded)
            if (have == name)
                return;
        expanded.push_back(name);
    };
    for (const std::string& name : suites) {
        if (!known_suite(name))
            fail("suites", "unknown suite '" + name + "'");
        if (name == "all") {
            for (const std::string& s : kSuiteNames) {
                if (s == "final-display" && !experiment.theta)
                    continue; // needs a vartheta operator; skipped for pair configs
                push_unique(s);
            }
        } else {
            push_unique(name);
        }
    }
    if (expanded.empty())
        fail("suites", "no suites selected");

    RunReport report;
    report.version = kVersionString;
    report.config_hash = experiment.config.hash();
    report.config_echo = experiment.config.to_json();
    report.overall_pass = true;
    for (const std::string& name : expanded) {
        SuiteRun run = run_one_suite(experiment, name, threads);
        for (SuiteItem& item : run.items) {
            CheckRecord record;
            if (auto* identity = std::get_if<IdentityReport>(&item)) {
                record.body = identity_to_json(*identity);
                record.pass = identity->pass;
            } else {
                const StatReport& stat = std::get<StatReport>(item);
                record.body = stat_to_json(stat);
                record.pass = stat.pass;
            }
            report.overall_pass = report.overall_pass && record.pass;
            report.checks.push_back(std::move(record));
        }
    }

    const auto t1 = std::chrono::steady_clock::now();
    report.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

IdentityReport operator_structure_check(const BuiltExperiment& experiment) {
    if (!experiment.theta ||
        (experiment.vartheta_family != "b" && experiment.vartheta_family != "negative_b"))
        throw InvalidParameter("operator_structure_check needs vartheta = b or negative_b");
    const bool positive = experiment.vartheta_family == "b";
    const double expected_theta = positive ? 1.0 : -1.0;
    const double expected_plus = positive ? 1.0 : 0.0;
    const double expected_minus = positive ? 0.0 : 1.0;

    const ThetaOperator& theta = *experiment.theta;
    const FunctionSpace& space = experiment.space;
    double deviation = 0.0;
    for (int j = 0; j < space.cells(); ++j) {
        double t = space.mid(j);
        auto track = [&deviation](double actual, double expected) {
            double d = std::abs(actual - expected);
            if (d > deviation)
                deviation = d;
        };
        track(theta.theta.value(t), expected_theta);
        track(theta.theta_pos.value(t), expected_plus);
        track(theta.theta_neg.value(t), expected_minus);
        track(theta.sqrt_theta_pos.value(t), expected_plus);
        track(theta.sqrt_theta_neg.value(t), expected_minus);
    }

    IdentityReport report;
    report.name = "operator-structure";
    report.lhs = Complex(deviation, 0.0);
    report.rhs = Complex(0.0, 0.0);
    report.abs_err = deviation;
    report.rel_err = deviation;
    report.tolerance = 0.0; // the split of a constant symbol must be exact
    report.pass = deviation == 0.0;
    return report;
}

std::vector<IdentityReport> sine_display_checks(const BuiltExperiment& experiment,
                                                double tolerance) {
    if (!experiment.theta || experiment.vartheta_family != "sine")
        throw InvalidParameter("sine_display_checks needs the half-period sine vartheta");
    const FunctionSpace& space = experiment.space;
    const ThetaOperator& theta = *experiment.theta;
    const HPrimeElement& g = experiment.dirs.g1;
    const HPrimeElement& w = experiment.measure.atoms.front().element;
    const double b_total = experiment.b_total;
    const double pi = std::numbers::pi;

    // one deterministic draw per path argument, fixed by the config seed
    SamplePath x1 = sample_path_increments(space, {experiment.config.seed, 0});
    SamplePath x2 = sample_path_increments(space, {experiment.config.seed, 1});

    // pipeline values of the eight display quantities
    const double p1 = space.pwz(experiment.ops.a1.root.apply(g), x1);
    const double p2 = space.pwz(experiment.ops.a2.root.apply(g), x2);
    const double p3 = quadratic_form(theta.full(), w, space);
    const double p4 = bilinear_form(theta.full(), w, g, space);
    const HPrimeElement& a = space.mean_element();
    const double p5 = space.inner(g, odot(theta.vartheta_half_plus(), a));
    const double p6 = space.inner(g, odot(theta.vartheta_half_minus(), a));
    const double p7 = space.inner(w, odot(theta.vartheta_half_plus(), a));
    const double p8 = space.inner(w, odot(theta.vartheta_half_minus(), a));

    // the same quantities from the printed forms: theta(t) = (pi/b(T)) cos(pi b(t)/b(T)),
    // positive on the early half of the clock, with square roots on the
    // factored pieces and the mean density Da = a'/b'. Alongside each sum the
    // loop tracks its L1 mass: integrands like cos * sin^2 cancel to the
    // quadrature residual, so agreement is judged against the mass, never
    // against a result that is legitimately ~0.
    double d[8] = {0.0};
    double mass[8] = {0.0};
    auto add = [&d, &mass](int slot, double term) {
        d[slot] += term;
        mass[slot] += std::abs(term);
    };
    for (int j = 0; j < space.cells(); ++j) {
        const double t = space.mid(j);
        const double theta_t =
            pi / b_total * std::cos(pi * experiment.variance_fn.value(t) / b_total);
        const double dg = g.density.value(t);
        const double dw = w.density.value(t);
        const double da =
            experiment.mean_fn.derivative(t) / experiment.variance_fn.derivative(t);
        const double db = space.db(j);
        const double dx1 = x1.values[static_cast<std::size_t>(j) + 1] -
                           x1.values[static_cast<std::size_t>(j)];
        const double dx2 = x2.values[static_cast<std::size_t>(j) + 1] -
                           x2.values[static_cast<std::size_t>(j)];
        if (theta_t > 0.0) {
            const double root = std::sqrt(theta_t);
            add(0, root * dg * dx1);
            add(4, root * dg * da * db);
            add(6, root * dw * da * db);
        } else {
            const double root = std::sqrt(-theta_t);
            add(1, root * dg * dx2);
            add(5, root * dg * da * db);
            add(7, root * dw * da * db);
        }
        add(2, theta_t * dw * dw * db);
        add(3, theta_t * dw * dg * db);
    }

    const char* names[8] = {"sine-root-plus-pwz", "sine-root-minus-pwz", "sine-quad-form",
                            "sine-cross-form",    "sine-mean-plus-g",    "sine-mean-minus-g",
                            "sine-mean-plus-w",   "sine-mean-minus-w"};
    const double pipeline[8] = {p1, p2, p3, p4, p5, p6, p7, p8};
    std::vector<IdentityReport> checks;
    for (int k = 0; k < 8; ++k) {
        IdentityReport report;
        report.name = names[k];
        report.lhs = Complex(pipeline[k], 0.0);
        report.rhs = Complex(d[k], 0.0);
        report.abs_err = std::abs(pipeline[k] - d[k]);
        double scale = std::max({std::abs(pipeline[k]), std::abs(d[k]), mass[k]});
        report.rel_err = scale > 0.0 ? report.abs_err / scale : 0.0;
        report.tolerance = tolerance;
        report.pass = report.rel_err <= tolerance;
        report.details["mass"] = mass[k];
        checks.push_back(std::move(report));
    }
    return checks;
}

} // namespace gbfi
