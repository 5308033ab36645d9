#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holefield/bounds.hpp"
#include "holefield/model.hpp"
#include "holefield/montecarlo.hpp"
#include "holefield/quadrature.hpp"

namespace holefield::cli {

enum class SweepVar { GammaDb, Lambda1, D, Lambda2OverLambda1 };

std::string_view sweep_var_name(SweepVar v);  // "gamma_db", "lambda1", "D", "lambda2_over_lambda1"
std::optional<SweepVar> parse_sweep_var(std::string_view name);

/// Applies one grid value to a parameter set (gamma_db is converted to linear here).
NetworkParams apply_sweep(NetworkParams params, SweepVar var, double value);

/// What a row measures. Bounds tags evaluate coverage; kUbOverLb1 is the
/// directly computed UB / LB1 ratio, kMonteCarlo the empirical coverage.
struct EstimatorSpec {
    enum class Kind { Bound, UbOverLb1, MonteCarlo };
    Kind kind = Kind::Bound;
    bounds::Estimator tag = bounds::Estimator::Lb1Closest;
    int k = 0;  // LBK only; 0 means the run's default k

    /// "LB1_CLOSEST", "LBK_K_CLOSEST:3", "UB_OVER_LB1", "MC".
    std::string label(int default_k) const;
};

/// Accepts every bounds tag, "LBK_K_CLOSEST:<k>", "UB_OVER_LB1" and "MC".
std::optional<EstimatorSpec> parse_estimator(std::string_view text);

struct NamedScenario {
    std::string name;
    NetworkParams params;
};

struct Sweep {
    SweepVar var = SweepVar::GammaDb;
    std::vector<double> grid;
};

struct OutputSpec {
    std::string path;         // empty: stdout
    std::string format = "csv";
    bool timestamp = true;    // false also zeroes runtime_ms so reruns are byte-identical
};

struct RunSpec {
    std::vector<NamedScenario> scenarios;
    Sweep sweep;
    std::vector<EstimatorSpec> estimators;
    montecarlo::SimConfig sim;
    quadrature::QuadSpec quad;
    bounds::EstimatorOptions options;
    OutputSpec output;
    unsigned threads = 0;  // worker pool over grid points; 0: hardware concurrency
};

/// Throws ConfigError: empty scenario list, grid or estimator list, a grid
/// that is not strictly increasing, invalid parameters at any grid point.
void validate(const RunSpec& spec);

/// Evenly spaced grid from..to inclusive; throws ConfigError on a bad step.
std::vector<double> make_grid(double from, double to, double step);

/// Builds a RunSpec from a JSON document. Missing fields keep the defaults of
/// `base`. Throws ConfigError on malformed input.
RunSpec runspec_from_json(std::string_view json_text, RunSpec base = {});

/// Canned spec for "fig5" ... "fig15"; throws ConfigError on unknown ids.
RunSpec figure_spec(std::string_view figure_id);

struct Row {
    std::string scenario;
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string estimator;
    double value = 0.0;
    double err = 0.0;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;

    /// Field-wise; NaN compares equal to NaN.
    bool operator==(const Row& other) const;
};

struct SweepResult {
    std::vector<Row> rows;
    std::vector<std::string> notes;  // numerical failures and warnings
    bool numerical_failure = false;
};

/// Evaluates every estimator at every grid point of every scenario. Rows are
/// ordered by (scenario, sweep_value, estimator) in the order given by the spec.
SweepResult run(const RunSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "scenario,sweep_var,sweep_value,estimator,value,err,runtime_ms,seed";

/// 12 significant digits.
std::string format_number(double x);

void write_csv(std::ostream& out, const SweepResult& result, std::optional<std::string> timestamp = {});
SweepResult read_csv(std::istream& in);
void write_json(std::ostream& out, const SweepResult& result, std::optional<std::string> timestamp = {});

/// Rows rounded through the CSV number format, i.e. what read_csv returns
/// after write_csv.
SweepResult rounded(const SweepResult& result);

}  // namespace holefield::cli
