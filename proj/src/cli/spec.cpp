#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "holefield/cli.hpp"
#include "holefield/errors.hpp"

namespace holefield::cli {

namespace {

using nlohmann::json;

constexpr std::string_view kUbOverLb1 = "UB_OVER_LB1";
constexpr std::string_view kMc = "MC";

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError("unknown key '" + it.key() + "' in " + std::string(where));
    }
}

double number(const json& j, std::string_view key) {
    if (!j.is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
    return j.get<double>();
}

std::uint64_t unsigned_number(const json& j, std::string_view key) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
}

NamedScenario scenario_from_json(const json& j) {
    if (j.is_string()) {
        const ScenarioPreset p = preset(j.get<std::string>());
        return {p.name, p.params};
    }
    if (!j.is_object()) throw ConfigError("scenario must be a preset name or an object");
    reject_unknown_keys(j, {"preset", "name", "lambda1", "lambda2", "D", "alpha", "P", "r0", "gamma_db"},
                        "scenario");
    NamedScenario sc{"custom", NetworkParams{}};
    if (j.contains("preset")) {
        if (!j["preset"].is_string()) throw ConfigError("'preset' must be a string");
        const ScenarioPreset p = preset(j["preset"].get<std::string>());
        sc = {p.name, p.params};
    }
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ConfigError("'name' must be a string");
        sc.name = j["name"].get<std::string>();
    }
    NetworkParams& p = sc.params;
    if (j.contains("lambda1")) p.lambda1 = number(j["lambda1"], "lambda1");
    if (j.contains("lambda2")) p.lambda2 = number(j["lambda2"], "lambda2");
    if (j.contains("D")) p.D = number(j["D"], "D");
    if (j.contains("alpha")) p.alpha = number(j["alpha"], "alpha");
    if (j.contains("P")) p.P = number(j["P"], "P");
    if (j.contains("r0")) p.r0 = number(j["r0"], "r0");
    if (j.contains("gamma_db")) p.gamma = db_to_linear(number(j["gamma_db"], "gamma_db"));
    return sc;
}

Sweep sweep_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("sweep must be an object");
    reject_unknown_keys(j, {"variable", "grid", "from", "to", "step"}, "sweep");
    Sweep sw;
    if (!j.contains("variable") || !j["variable"].is_string())
        throw ConfigError("sweep.variable is required");
    const auto var = parse_sweep_var(j["variable"].get<std::string>());
    if (!var) throw ConfigError("unknown sweep variable '" + j["variable"].get<std::string>() + "'");
    sw.var = *var;
    if (j.contains("grid")) {
        if (!j["grid"].is_array()) throw ConfigError("sweep.grid must be an array");
        for (const auto& x : j["grid"]) sw.grid.push_back(number(x, "grid value"));
    } else if (j.contains("from") && j.contains("to") && j.contains("step")) {
        sw.grid = make_grid(number(j["from"], "from"), number(j["to"], "to"), number(j["step"], "step"));
    } else {
        throw ConfigError("sweep needs 'grid' or 'from'/'to'/'step'");
    }
    return sw;
}

RunSpec base_figure(std::vector<Scenario> scenarios, SweepVar var, std::vector<double> grid,
                    std::vector<std::string_view> estimators) {
    RunSpec spec;
    for (Scenario s : scenarios) {
        const ScenarioPreset p = preset(s);
        spec.scenarios.push_back({p.name, p.params});
    }
    spec.sweep = {var, std::move(grid)};
    for (auto e : estimators) spec.estimators.push_back(*parse_estimator(e));
    return spec;
}

const std::vector<std::string_view> kCoverageCurves{"PPP_LOWER",      "FOSA",
                                                    "LB1_CLOSEST",    "LBK_K_CLOSEST:2",
                                                    "UB_INDEP_HOLES", "OVERLAP_MEAN_APPROX",
                                                    "MC"};

}  // namespace

std::string_view sweep_var_name(SweepVar v) {
    switch (v) {
        case SweepVar::GammaDb: return "gamma_db";
        case SweepVar::Lambda1: return "lambda1";
        case SweepVar::D: return "D";
        case SweepVar::Lambda2OverLambda1: return "lambda2_over_lambda1";
    }
    return "?";
}

std::optional<SweepVar> parse_sweep_var(std::string_view name) {
    for (SweepVar v : {SweepVar::GammaDb, SweepVar::Lambda1, SweepVar::D, SweepVar::Lambda2OverLambda1})
        if (sweep_var_name(v) == name) return v;
    return std::nullopt;
}

NetworkParams apply_sweep(NetworkParams p, SweepVar var, double value) {
    switch (var) {
        case SweepVar::GammaDb: p.gamma = db_to_linear(value); break;
        case SweepVar::Lambda1: p.lambda1 = value; break;
        case SweepVar::D: p.D = value; break;
        case SweepVar::Lambda2OverLambda1:
            if (!(p.lambda1 > 0.0)) throw ConfigError("lambda2_over_lambda1 sweep needs lambda1 > 0");
            p.lambda2 = value * p.lambda1;
            break;
    }
    return p;
}

std::string EstimatorSpec::label(int default_k) const {
    switch (kind) {
        case Kind::UbOverLb1: return std::string(kUbOverLb1);
        case Kind::MonteCarlo: return std::string(kMc);
        case Kind::Bound: break;
    }
    std::string s(bounds::estimator_tag(tag));
    if (tag == bounds::Estimator::LbkKClosest) s += ":" + std::to_string(k ? k : default_k);
    return s;
}

std::optional<EstimatorSpec> parse_estimator(std::string_view text) {
    const std::string t = upper(text);
    if (t == kUbOverLb1) return EstimatorSpec{EstimatorSpec::Kind::UbOverLb1};
    if (t == kMc) return EstimatorSpec{EstimatorSpec::Kind::MonteCarlo};
    std::string_view tag = t;
    int k = 0;
    if (const auto colon = t.find(':'); colon != std::string::npos) {
        tag = std::string_view(t).substr(0, colon);
        const std::string digits = t.substr(colon + 1);
        if (digits.empty() || digits.size() > 2 ||
            !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return std::nullopt;
        k = std::stoi(digits);
    }
    const auto est = bounds::parse_estimator_tag(tag);
    if (!est) return std::nullopt;
    if (k != 0 && *est != bounds::Estimator::LbkKClosest) return std::nullopt;
    return EstimatorSpec{EstimatorSpec::Kind::Bound, *est, k};
}

std::vector<double> make_grid(double from, double to, double step) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(from) || !std::isfinite(to) || to < from)
        throw ConfigError("grid needs finite from <= to and step > 0");
    const double span = (to - from) / step;
    if (span > 1e6) throw ConfigError("grid too large");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9));
    std::vector<double> g;
    for (std::size_t i = 0; i <= n; ++i) g.push_back(from + static_cast<double>(i) * step);
    return g;
}

void validate(const RunSpec& spec) {
    if (spec.scenarios.empty()) throw ConfigError("no scenario given");
    if (spec.sweep.grid.empty()) throw ConfigError("sweep grid is empty");
    for (std::size_t i = 0; i < spec.sweep.grid.size(); ++i) {
        if (!std::isfinite(spec.sweep.grid[i])) throw ConfigError("sweep grid values must be finite");
        if (i > 0 && !(spec.sweep.grid[i] > spec.sweep.grid[i - 1]))
            throw ConfigError("sweep grid must be strictly increasing");
    }
    if (spec.estimators.empty()) throw ConfigError("estimator list is empty");
    std::set<std::string> labels;
    for (const auto& e : spec.estimators) {
        if (!labels.insert(e.label(spec.options.k)).second)
            throw ConfigError("estimator listed twice: " + e.label(spec.options.k));
        if (e.kind == EstimatorSpec::Kind::Bound && e.tag == bounds::Estimator::LbkKClosest) {
            const int k = e.k ? e.k : spec.options.k;
            if (k < 1 || k > 8) throw ConfigError("LBK k must be between 1 and 8");
        }
        if (e.kind == EstimatorSpec::Kind::Bound && e.tag == bounds::Estimator::CondSingleHole &&
            !spec.options.hole_distance)
            throw ConfigError("COND_SINGLE_HOLE needs hole_distance");
    }
    quadrature::validate(spec.quad);
    if (spec.output.format != "csv" && spec.output.format != "json")
        throw ConfigError("format must be csv or json");
    std::set<std::string> names;
    for (const auto& sc : spec.scenarios) {
        if (sc.name.empty() || sc.name.find_first_of(",\"\n\r#") != std::string::npos)
            throw ConfigError("scenario name must be non-empty without commas, quotes, '#' or newlines");
        if (!names.insert(sc.name).second) throw ConfigError("scenario listed twice: " + sc.name);
        for (double v : spec.sweep.grid) {
            const NetworkParams p = apply_sweep(sc.params, spec.sweep.var, v);
            validate(p);
            montecarlo::validate(spec.sim, p);
        }
    }
}

RunSpec runspec_from_json(std::string_view json_text, RunSpec base) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown_keys(j,
                        {"scenario", "sweep", "estimators", "sim", "quad", "k", "outer_samples",
                         "hole_distance", "seed", "threads", "output"},
                        "config");
    RunSpec spec = std::move(base);
    if (j.contains("scenario")) {
        spec.scenarios.clear();
        if (j["scenario"].is_array()) {
            for (const auto& s : j["scenario"]) spec.scenarios.push_back(scenario_from_json(s));
        } else {
            spec.scenarios.push_back(scenario_from_json(j["scenario"]));
        }
    }
    if (j.contains("sweep")) spec.sweep = sweep_from_json(j["sweep"]);
    if (j.contains("estimators")) {
        if (!j["estimators"].is_array()) throw ConfigError("estimators must be an array");
        spec.estimators.clear();
        for (const auto& e : j["estimators"]) {
            if (!e.is_string()) throw ConfigError("estimator entries must be strings");
            const auto parsed = parse_estimator(e.get<std::string>());
            if (!parsed) throw ConfigError("unknown estimator '" + e.get<std::string>() + "'");
            spec.estimators.push_back(*parsed);
        }
    }
    if (j.contains("seed")) {
        spec.sim.seed = unsigned_number(j["seed"], "seed");
        spec.options.seed = spec.sim.seed;
    }
    if (j.contains("sim")) {
        const json& s = j["sim"];
        if (!s.is_object()) throw ConfigError("sim must be an object");
        reject_unknown_keys(s, {"window_radius", "hole_window_radius", "iterations", "seed"}, "sim");
        if (s.contains("window_radius")) spec.sim.window_radius = number(s["window_radius"], "window_radius");
        if (s.contains("hole_window_radius"))
            spec.sim.hole_window_radius = number(s["hole_window_radius"], "hole_window_radius");
        if (s.contains("iterations")) spec.sim.iterations = unsigned_number(s["iterations"], "iterations");
        if (s.contains("seed")) spec.sim.seed = unsigned_number(s["seed"], "seed");
    }
    if (j.contains("quad")) {
        const json& q = j["quad"];
        if (!q.is_object()) throw ConfigError("quad must be an object");
        reject_unknown_keys(q, {"rel_tol", "abs_tol", "max_subdivisions"}, "quad");
        if (q.contains("rel_tol")) spec.quad.rel_tol = number(q["rel_tol"], "rel_tol");
        if (q.contains("abs_tol")) spec.quad.abs_tol = number(q["abs_tol"], "abs_tol");
        if (q.contains("max_subdivisions"))
            spec.quad.max_subdivisions = static_cast<int>(unsigned_number(q["max_subdivisions"], "max_subdivisions"));
    }
    if (j.contains("k")) spec.options.k = static_cast<int>(unsigned_number(j["k"], "k"));
    if (j.contains("outer_samples")) spec.options.outer_samples = unsigned_number(j["outer_samples"], "outer_samples");
    if (j.contains("hole_distance")) spec.options.hole_distance = number(j["hole_distance"], "hole_distance");
    if (j.contains("threads")) spec.threads = static_cast<unsigned>(unsigned_number(j["threads"], "threads"));
    if (j.contains("output")) {
        const json& o = j["output"];
        if (!o.is_object()) throw ConfigError("output must be an object");
        reject_unknown_keys(o, {"path", "format", "timestamp"}, "output");
        if (o.contains("path")) {
            if (!o["path"].is_string()) throw ConfigError("output.path must be a string");
            spec.output.path = o["path"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string()) throw ConfigError("output.format must be a string");
            spec.output.format = o["format"].get<std::string>();
        }
        if (o.contains("timestamp")) {
            if (!o["timestamp"].is_boolean()) throw ConfigError("output.timestamp must be a boolean");
            spec.output.timestamp = o["timestamp"].get<bool>();
        }
    }
    return spec;
}

RunSpec figure_spec(std::string_view figure_id) {
    const std::string id = upper(figure_id);
    const std::vector<Scenario> all(kAllScenarios.begin(), kAllScenarios.end());
    if (id == "FIG5") {
        return base_figure(all, SweepVar::GammaDb, make_grid(-10, 20, 2), {"RATIO_APPROX", "UB_OVER_LB1"});
    }
    if (id == "FIG6") {
        RunSpec spec = base_figure({Scenario::LdSh}, SweepVar::Lambda1, make_grid(0.0, 0.5, 0.05),
                                   {"PPP_LOWER", "FOSA", "LB1_CLOSEST", "UB_INDEP_HOLES", "OVERLAP_MEAN_APPROX", "MC"});
        spec.scenarios[0] = {"D=1", spec.scenarios[0].params};
        spec.scenarios[0].params.D = 1.0;
        return spec;
    }
    if (id == "FIG7") {
        RunSpec spec = base_figure({Scenario::LdSh}, SweepVar::D, make_grid(0.1, 2.0, 0.1),
                                   {"PPP_LOWER", "FOSA", "LB1_CLOSEST", "UB_INDEP_HOLES", "OVERLAP_MEAN_APPROX", "MC"});
        spec.scenarios[0] = {"lambda1=0.1", spec.scenarios[0].params};
        spec.scenarios[0].params.lambda1 = 0.1;
        return spec;
    }
    const std::vector<std::string> gamma_ids{"FIG8", "FIG9", "FIG10", "FIG11"};
    const std::vector<std::string> ratio_ids{"FIG12", "FIG13", "FIG14", "FIG15"};
    for (std::size_t i = 0; i < 4; ++i) {
        if (id == gamma_ids[i])
            return base_figure({all[i]}, SweepVar::GammaDb, make_grid(-10, 20, 2), kCoverageCurves);
        if (id == ratio_ids[i])
            return base_figure({all[i]}, SweepVar::Lambda2OverLambda1, make_grid(5, 50, 5), kCoverageCurves);
    }
    throw ConfigError("unknown figure id '" + std::string(figure_id) + "' (expected fig5 ... fig15)");
}

}  // namespace holefield::cli
