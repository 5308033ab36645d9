#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "holefield/cli.hpp"
#include "holefield/errors.hpp"

using namespace holefield;
using namespace holefield::cli;
namespace fs = std::filesystem;

namespace {

RunSpec small_spec() {
    RunSpec spec;
    for (Scenario sc : kAllScenarios) spec.scenarios.push_back({std::string(scenario_name(sc)), preset(sc).params});
    spec.sweep = {SweepVar::GammaDb, make_grid(-10, 20, 2)};
    spec.estimators = {*parse_estimator("LB1_CLOSEST"), *parse_estimator("UB_INDEP_HOLES"), *parse_estimator("MC")};
    spec.sim.iterations = 200;
    spec.sim.window_radius = 15;
    spec.output.timestamp = false;
    spec.threads = 1;
    return spec;
}

std::string csv_of(const SweepResult& r) {
    std::ostringstream out;
    write_csv(out, r);
    return out.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "holefield_test_cli";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p;
}

int run_cli(const std::string& args) {
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(HOLEFIELD_CLI_PATH) + " " + args + " > " +
                            (scratch_dir() / "stdout.txt").string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("estimator labels") {
    CHECK(parse_estimator("lb1_closest")->tag == bounds::Estimator::Lb1Closest);
    CHECK(parse_estimator("MC")->kind == EstimatorSpec::Kind::MonteCarlo);
    CHECK(parse_estimator("UB_OVER_LB1")->kind == EstimatorSpec::Kind::UbOverLb1);
    const auto k3 = parse_estimator("LBK_K_CLOSEST:3");
    REQUIRE(k3);
    CHECK(k3->k == 3);
    CHECK(k3->label(2) == "LBK_K_CLOSEST:3");
    CHECK(parse_estimator("LBK_K_CLOSEST")->label(2) == "LBK_K_CLOSEST:2");
    CHECK_FALSE(parse_estimator("LB7"));
    CHECK_FALSE(parse_estimator("LBK_K_CLOSEST:x"));
    for (const char* t : {"PPP_LOWER", "FOSA", "UB_INDEP_HOLES", "RATIO_APPROX", "OVERLAP_MEAN_APPROX"})
        CHECK(parse_estimator(t)->label(2) == t);
}

TEST_CASE("sweep variables and grids") {
    for (SweepVar v : {SweepVar::GammaDb, SweepVar::Lambda1, SweepVar::D, SweepVar::Lambda2OverLambda1})
        CHECK(parse_sweep_var(sweep_var_name(v)) == v);
    CHECK_FALSE(parse_sweep_var("alpha"));

    const auto g = make_grid(-10, 20, 2);
    CHECK(g.size() == 16);
    CHECK(g.front() == -10);
    CHECK(g.back() == 20);
    CHECK(make_grid(0.1, 2.0, 0.1).size() == 20);
    CHECK(make_grid(0.1, 2.0, 0.1).back() == doctest::Approx(2.0));
    CHECK_THROWS_AS(make_grid(1, 0, 1), ConfigError);
    CHECK_THROWS_AS(make_grid(0, 1, 0), ConfigError);

    const NetworkParams base = preset(Scenario::HdSh).params;
    CHECK(apply_sweep(base, SweepVar::GammaDb, 10).gamma == doctest::Approx(10.0));
    CHECK(apply_sweep(base, SweepVar::D, 0.3).D == 0.3);
    CHECK(apply_sweep(base, SweepVar::Lambda1, 0.3).lambda1 == 0.3);
    CHECK(apply_sweep(base, SweepVar::Lambda2OverLambda1, 5).lambda2 == doctest::Approx(1.0));
    NetworkParams none = base;
    none.lambda1 = 0;
    CHECK_THROWS_AS(apply_sweep(none, SweepVar::Lambda2OverLambda1, 5), ConfigError);
}

TEST_CASE("run spec from JSON") {
    const RunSpec spec = runspec_from_json(R"({
        "scenario": [{"preset": "HD-LH", "name": "big", "D": 1.2}, "LD-SH"],
        "sweep": {"variable": "D", "from": 0.5, "to": 1.5, "step": 0.5},
        "estimators": ["LB1_CLOSEST", "LBK_K_CLOSEST:3", "MC"],
        "sim": {"iterations": 100, "window_radius": 12},
        "quad": {"rel_tol": 1e-8},
        "k": 4, "seed": 17, "threads": 2,
        "output": {"format": "json", "timestamp": false}
    })");
    REQUIRE(spec.scenarios.size() == 2);
    CHECK(spec.scenarios[0].name == "big");
    CHECK(spec.scenarios[0].params.D == 1.2);
    CHECK(spec.scenarios[0].params.lambda1 == 0.2);
    CHECK(spec.scenarios[1].name == "LD-SH");
    CHECK(spec.sweep.var == SweepVar::D);
    CHECK(spec.sweep.grid == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(spec.estimators.size() == 3);
    CHECK(spec.sim.iterations == 100);
    CHECK(spec.sim.window_radius == 12);
    CHECK(spec.quad.rel_tol == 1e-8);
    CHECK(spec.options.k == 4);
    CHECK(spec.sim.seed == 17);
    CHECK(spec.options.seed == 17);
    CHECK(spec.threads == 2);
    CHECK(spec.output.format == "json");
    CHECK_FALSE(spec.output.timestamp);

    // Presets survive a trip through explicit JSON fields.
    for (Scenario sc : kAllScenarios) {
        const NetworkParams& p = preset(sc).params;
        nlohmann::json j{{"scenario",
                          {{"name", "x"}, {"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"D", p.D},
                           {"alpha", p.alpha}, {"P", p.P}, {"r0", p.r0}, {"gamma_db", linear_to_db(p.gamma)}}}};
        const RunSpec r = runspec_from_json(j.dump());
        CHECK(r.scenarios[0].params.lambda1 == p.lambda1);
        CHECK(r.scenarios[0].params.D == p.D);
        CHECK(r.scenarios[0].params.gamma == doctest::Approx(p.gamma).epsilon(1e-14));
    }
}

TEST_CASE("bad configurations") {
    CHECK_THROWS_AS(runspec_from_json("{"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json("[]"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json(R"({"scenari": "LD-SH"})"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json(R"({"scenario": "MD-SH"})"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json(R"({"estimators": ["LB9"]})"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json(R"({"sweep": {"variable": "alpha", "grid": [3]}})"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json(R"({"sim": {"iterations": -1}})"), ConfigError);
    CHECK_THROWS_AS(runspec_from_json(R"({"output": {"timestamp": "no"}})"), ConfigError);

    RunSpec spec = small_spec();
    CHECK_NOTHROW(validate(spec));
    auto broken = [&](auto mutate) {
        RunSpec s = small_spec();
        mutate(s);
        return s;
    };
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.scenarios.clear(); })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.sweep.grid = {1, 1}; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.sweep.grid.clear(); })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.estimators.push_back(s.estimators[0]); })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.estimators = {*parse_estimator("LBK_K_CLOSEST:9")}; })),
                    ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.estimators = {*parse_estimator("COND_SINGLE_HOLE")}; })),
                    ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.output.format = "xml"; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.scenarios[0].name = "a,b"; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.scenarios[1].name = s.scenarios[0].name; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) { s.sim.iterations = 0; })), ConfigError);
    CHECK_THROWS_AS(validate(broken([](RunSpec& s) {
                        s.sweep = {SweepVar::D, {-1.0}};
                    })),
                    ConfigError);
    CHECK_THROWS_AS(run(broken([](RunSpec& s) { s.scenarios.clear(); })), ConfigError);
}

TEST_CASE("figure specs") {
    const RunSpec f7 = figure_spec("fig7");
    CHECK(f7.sweep.var == SweepVar::D);
    CHECK(f7.scenarios.size() == 1);
    CHECK(f7.scenarios[0].params.lambda1 == 0.1);
    CHECK(f7.sweep.grid.front() == doctest::Approx(0.1));
    CHECK(f7.sweep.grid.back() == doctest::Approx(2.0));

    const RunSpec f6 = figure_spec("fig6");
    CHECK(f6.sweep.var == SweepVar::Lambda1);
    CHECK(f6.scenarios[0].params.D == 1.0);

    const RunSpec f13 = figure_spec("fig13");
    CHECK(f13.sweep.var == SweepVar::Lambda2OverLambda1);
    CHECK(f13.scenarios[0].params.lambda1 == 0.2);
    CHECK(f13.scenarios[0].params.D == 0.6);

    const RunSpec f10 = figure_spec("FIG10");
    CHECK(f10.sweep.var == SweepVar::GammaDb);
    CHECK(f10.sweep.grid.size() == 16);
    CHECK(f10.scenarios[0].params.lambda1 == 0.05);
    CHECK(f10.scenarios[0].params.D == 1.5);

    const RunSpec f5 = figure_spec("fig5");
    CHECK(f5.scenarios.size() == 4);
    CHECK(f5.estimators[0].tag == bounds::Estimator::RatioApprox);

    for (int i = 5; i <= 15; ++i) CHECK_NOTHROW(validate(figure_spec("fig" + std::to_string(i))));
    CHECK_THROWS_AS(figure_spec("fig4"), ConfigError);
    CHECK_THROWS_AS(figure_spec("fig16"), ConfigError);
}

TEST_CASE("sweep rows, CSV round trip and reruns") {
    const RunSpec spec = small_spec();
    const SweepResult a = run(spec);
    CHECK_FALSE(a.numerical_failure);
    REQUIRE(a.rows.size() == 4 * 16 * 3);
    CHECK(a.rows[0].scenario == "LD-SH");
    CHECK(a.rows[0].sweep_var == "gamma_db");
    CHECK(a.rows[0].sweep_value == -10);
    CHECK(a.rows[0].estimator == "LB1_CLOSEST");
    CHECK(a.rows[2].estimator == "MC");
    CHECK(a.rows[2].seed == spec.sim.seed);
    CHECK(a.rows[0].seed == 0);
    CHECK(a.rows[3].sweep_value == -8);
    CHECK(a.rows.back().scenario == "HD-LH");
    for (const Row& r : a.rows) {
        CHECK(r.runtime_ms == 0.0);
        CHECK(r.value >= 0.0);
        CHECK(r.value <= 1.0);
    }

    std::istringstream in(csv_of(a));
    CHECK(read_csv(in).rows == rounded(a).rows);

    std::ostringstream stamped;
    write_csv(stamped, a, std::string("2026-01-01T00:00:00Z"));
    CHECK(stamped.str().rfind("# generated 2026-01-01T00:00:00Z\n", 0) == 0);
    std::istringstream in2(stamped.str());
    CHECK(read_csv(in2).rows == rounded(a).rows);

    // A rerun with a different worker count gives identical bytes.
    RunSpec again = spec;
    again.threads = 3;
    CHECK(csv_of(run(again)) == csv_of(a));

    std::ostringstream js;
    write_json(js, a);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["rows"].size() == a.rows.size());
    CHECK(j["numerical_failure"] == false);
}

TEST_CASE("numerical failures become NaN rows") {
    RunSpec spec = small_spec();
    spec.scenarios.resize(1);
    spec.sweep.grid = {10};
    spec.estimators = {*parse_estimator("PPP_LOWER"), *parse_estimator("LB1_CLOSEST")};
    spec.quad = {1e-15, 1e-300, 1};
    const SweepResult r = run(spec);
    CHECK(r.numerical_failure);
    REQUIRE(r.rows.size() == 2);
    CHECK(std::isfinite(r.rows[0].value));
    CHECK(std::isnan(r.rows[1].value));
    CHECK_FALSE(r.notes.empty());

    const std::string csv = csv_of(r);
    CHECK(csv.find("LB1_CLOSEST,nan,nan") != std::string::npos);
    std::istringstream in(csv);
    CHECK(read_csv(in).rows == rounded(r).rows);

    std::ostringstream js;
    write_json(js, r);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["rows"][1]["value"].is_null());
    CHECK(j["numerical_failure"] == true);
}

TEST_CASE("CSV reader rejects malformed input") {
    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_AS(read_csv(bad_header), ConfigError);
    std::istringstream short_row(std::string(kCsvHeader) + "\nLD-SH,gamma_db,1\n");
    CHECK_THROWS_AS(read_csv(short_row), ConfigError);
}

TEST_CASE("executable exit codes") {
    CHECK(run_cli("bounds --scenario HD-SH --no-timestamp --outer-samples 1000") == 0);
    const std::string out = slurp(scratch_dir() / "stdout.txt");
    CHECK(out.rfind(std::string(kCsvHeader), 0) == 0);
    CHECK(out.find("LBK_K_CLOSEST:2") != std::string::npos);

    CHECK(run_cli("ratio --scenario HD-LH --gamma-db 0 10 --format json --no-timestamp") == 0);
    const auto j = nlohmann::json::parse(slurp(scratch_dir() / "stdout.txt"));
    CHECK(j["rows"].size() == 4);

    CHECK(run_cli("simulate --scenario LD-SH --iterations 300 --no-timestamp --seed 5") == 0);
    const std::string first = slurp(scratch_dir() / "stdout.txt");
    CHECK(run_cli("simulate --scenario LD-SH --iterations 300 --no-timestamp --seed 5 --threads 1") == 0);
    CHECK(slurp(scratch_dir() / "stdout.txt") == first);

    CHECK(run_cli("bounds --scenario MD-SH") == 2);
    const auto err = nlohmann::json::parse(slurp(scratch_dir() / "stderr.txt"));
    CHECK(err["error"] == "config");
    CHECK(run_cli("bounds --alpha 2") == 2);
    CHECK(run_cli("bounds --bogus-flag") == 2);
    CHECK(run_cli("reproduce fig99") == 2);

    const fs::path bad = write_file("bad.json", R"({"scenario": "LD-SH", "estimators": []})");
    CHECK(run_cli("sweep --config " + bad.string()) == 2);
    const fs::path missing = scratch_dir() / "does_not_exist.json";
    CHECK(run_cli("sweep --config " + missing.string()) == 2);

    const fs::path stiff = write_file(
        "stiff.json",
        R"({"scenario": "HD-LH", "sweep": {"variable": "gamma_db", "grid": [10]},
            "estimators": ["LB1_CLOSEST"], "quad": {"rel_tol": 1e-15, "abs_tol": 1e-300, "max_subdivisions": 1}})");
    CHECK(run_cli("sweep --no-timestamp --config " + stiff.string()) == 3);
    CHECK(slurp(scratch_dir() / "stdout.txt").find("nan") != std::string::npos);

    const fs::path good = write_file(
        "good.json", R"({"scenario": "LD-LH", "sweep": {"variable": "lambda1", "grid": [0.05, 0.1]},
                        "estimators": ["FOSA", "UB_INDEP_HOLES"], "output": {"timestamp": false}})");
    const fs::path dest = scratch_dir() / "out.csv";
    CHECK(run_cli("sweep --config " + good.string() + " --out " + dest.string()) == 0);
    std::ifstream csv(dest);
    CHECK(read_csv(csv).rows.size() == 4);
}
