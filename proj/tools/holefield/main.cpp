// holefield: coverage bounds and Monte Carlo for Poisson hole networks.

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "holefield/cli.hpp"
#include "holefield/errors.hpp"

using namespace holefield;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> iterations;
    std::string out;
    std::string format;
    bool no_timestamp = false;
    std::optional<unsigned> threads;
};

struct ParamFlags {
    std::string scenario = "LD-SH";
    std::optional<double> lambda1, lambda2, D, alpha, P, r0;
    std::vector<double> gamma_db;
    std::optional<int> k;
    std::optional<double> hole_distance;
    std::optional<std::size_t> outer_samples;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "RunSpec JSON file; flags override its values");
    app->add_option("--seed", c.seed, "Seed for Monte Carlo and sampled estimators");
    app->add_option("--iterations", c.iterations, "Monte Carlo replicates");
    app->add_option("--out", c.out, "Output file (default: stdout)");
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp line and zero runtime_ms");
    app->add_option("--threads", c.threads, "Worker threads (default: all cores)");
}

void add_params(CLI::App* app, ParamFlags& f, bool with_estimator_knobs) {
    app->add_option("--scenario", f.scenario, "Preset: LD-SH, HD-SH, LD-LH, HD-LH");
    app->add_option("--lambda1", f.lambda1, "Hole density");
    app->add_option("--lambda2", f.lambda2, "Baseline density");
    app->add_option("--D", f.D, "Hole radius");
    app->add_option("--alpha", f.alpha, "Path-loss exponent");
    app->add_option("--P", f.P, "Transmit power");
    app->add_option("--r0", f.r0, "Serving distance");
    app->add_option("--gamma-db", f.gamma_db, "SIR threshold(s) in dB");
    if (with_estimator_knobs) {
        app->add_option("--k", f.k, "Holes used by LBK_K_CLOSEST (1..8)");
        app->add_option("--hole-distance", f.hole_distance, "Hole distance for COND_SINGLE_HOLE");
        app->add_option("--outer-samples", f.outer_samples, "Outer samples for sampled estimators");
    }
}

cli::RunSpec single_point_spec(const ParamFlags& f, std::vector<std::string_view> estimators) {
    cli::RunSpec spec;
    const ScenarioPreset p = preset(f.scenario);
    spec.scenarios.push_back({p.name, p.params});
    spec.sweep = {cli::SweepVar::GammaDb, {linear_to_db(p.params.gamma)}};
    for (auto e : estimators) spec.estimators.push_back(*cli::parse_estimator(e));
    return spec;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_overrides(cli::RunSpec& spec, const Common& c, const ParamFlags* f) {
    if (!c.config.empty()) spec = cli::runspec_from_json(read_file(c.config), spec);
    if (c.seed) {
        spec.sim.seed = *c.seed;
        spec.options.seed = *c.seed;
    }
    if (c.iterations) spec.sim.iterations = *c.iterations;
    if (!c.out.empty()) spec.output.path = c.out;
    if (!c.format.empty()) spec.output.format = c.format;
    if (c.no_timestamp) spec.output.timestamp = false;
    if (c.threads) spec.threads = *c.threads;
    if (!f) return;
    for (auto& sc : spec.scenarios) {
        NetworkParams& p = sc.params;
        if (f->lambda1) p.lambda1 = *f->lambda1;
        if (f->lambda2) p.lambda2 = *f->lambda2;
        if (f->D) p.D = *f->D;
        if (f->alpha) p.alpha = *f->alpha;
        if (f->P) p.P = *f->P;
        if (f->r0) p.r0 = *f->r0;
    }
    if (!f->gamma_db.empty()) spec.sweep = {cli::SweepVar::GammaDb, f->gamma_db};
    if (f->k) spec.options.k = *f->k;
    if (f->hole_distance) spec.options.hole_distance = *f->hole_distance;
    if (f->outer_samples) spec.options.outer_samples = *f->outer_samples;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int emit(const cli::RunSpec& spec, const cli::SweepResult& result) {
    std::optional<std::string> stamp;
    if (spec.output.timestamp) stamp = utc_timestamp();
    std::ofstream file;
    if (!spec.output.path.empty()) {
        file.open(spec.output.path);
        if (!file) throw ConfigError("cannot write output file '" + spec.output.path + "'");
    }
    std::ostream& out = spec.output.path.empty() ? std::cout : file;
    if (spec.output.format == "json") {
        cli::write_json(out, result, stamp);
    } else {
        cli::write_csv(out, result, stamp);
    }
    for (const auto& n : result.notes) std::cerr << "note: " << n << "\n";
    return result.numerical_failure ? kExitNumerical : 0;
}

void config_error(const std::string& message) {
    std::cerr << nlohmann::json{{"error", "config"}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage bounds, approximations and Monte Carlo for Poisson hole networks"};
    app.require_subcommand(1);

    Common common;
    ParamFlags params;
    std::string figure;

    auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate every estimator at one parameter point");
    add_common(bounds_cmd, common);
    add_params(bounds_cmd, params, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a RunSpec file");
    add_common(sweep_cmd, common);
    sweep_cmd->get_option("--config")->required();

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage only");
    add_common(sim_cmd, common);
    add_params(sim_cmd, params, false);

    auto* ratio_cmd = app.add_subcommand("ratio", "Approximate and direct UB / LB1 ratio");
    add_common(ratio_cmd, common);
    add_params(ratio_cmd, params, false);

    auto* repro_cmd = app.add_subcommand("reproduce", "Data behind a figure (fig5 ... fig15)");
    add_common(repro_cmd, common);
    repro_cmd->add_option("figure", figure, "Figure id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        cli::RunSpec spec;
        const ParamFlags* flags = &params;
        if (*bounds_cmd) {
            std::vector<std::string_view> tags{"PPP_LOWER",       "FOSA",
                                               "LB1_CLOSEST",     "UB_INDEP_HOLES",
                                               "RATIO_APPROX",    "LB2_TWO_HOLE_EXACT",
                                               "LBK_K_CLOSEST",   "OVERLAP_MEAN_APPROX"};
            if (params.hole_distance) tags.insert(tags.begin() + 2, "COND_SINGLE_HOLE");
            spec = single_point_spec(params, tags);
        } else if (*sweep_cmd) {
            spec = single_point_spec(params, {"LB1_CLOSEST", "UB_INDEP_HOLES"});
            flags = nullptr;
        } else if (*sim_cmd) {
            spec = single_point_spec(params, {"MC"});
        } else if (*ratio_cmd) {
            spec = single_point_spec(params, {"RATIO_APPROX", "UB_OVER_LB1"});
        } else {
            spec = cli::figure_spec(figure);
            flags = nullptr;
        }
        apply_overrides(spec, common, flags);
        const cli::SweepResult result = cli::run(spec);
        return emit(spec, result);
    } catch (const ConfigError& e) {
        config_error(e.what());
        return kExitConfig;
    } catch (const GeometryError& e) {
        config_error(e.what());
        return kExitConfig;
    }
}
