#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "holefield/cli.hpp"
#include "holefield/errors.hpp"

namespace holefield::cli {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool is_sampled(const EstimatorSpec& e, int k) {
    if (e.kind == EstimatorSpec::Kind::MonteCarlo) return true;
    if (e.kind != EstimatorSpec::Kind::Bound) return false;
    return e.tag == bounds::Estimator::Lb2TwoHoleExact ||
           (e.tag == bounds::Estimator::LbkKClosest && k > 3);
}

struct Task {
    std::size_t scenario = 0;
    std::size_t estimator = 0;
    std::vector<std::size_t> points;  // grid indices filled by this task
};

class Runner {
public:
    explicit Runner(const RunSpec& spec) : spec_(spec) {
        const std::size_t n_grid = spec.sweep.grid.size();
        const std::size_t n_est = spec.estimators.size();
        result_.rows.resize(spec.scenarios.size() * n_grid * n_est);
        for (std::size_t sc = 0; sc < spec.scenarios.size(); ++sc) {
            for (std::size_t e = 0; e < n_est; ++e) {
                const bool shared_draws = spec.estimators[e].kind == EstimatorSpec::Kind::MonteCarlo &&
                                          spec.sweep.var == SweepVar::GammaDb;
                if (shared_draws) {
                    Task t{sc, e, {}};
                    for (std::size_t g = 0; g < n_grid; ++g) t.points.push_back(g);
                    tasks_.push_back(std::move(t));
                } else {
                    for (std::size_t g = 0; g < n_grid; ++g) tasks_.push_back({sc, e, {g}});
                }
            }
        }
    }

    SweepResult run() {
        unsigned threads = spec_.threads ? spec_.threads : std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks_.size()));
        mc_threads_ = threads > 1 ? 1u : 0u;
        if (threads <= 1) {
            for (std::size_t i = 0; i < tasks_.size(); ++i) execute(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < tasks_.size(); i = next++) execute(i);
                });
            }
            for (auto& th : pool) th.join();
        }
        // Notes were appended in completion order; make them deterministic.
        std::sort(notes_.begin(), notes_.end());
        result_.notes = std::move(notes_);
        if (config_error_) std::rethrow_exception(config_error_);
        return std::move(result_);
    }

private:
    Row& slot(std::size_t sc, std::size_t g, std::size_t e) {
        const std::size_t n_grid = spec_.sweep.grid.size();
        const std::size_t n_est = spec_.estimators.size();
        return result_.rows[(sc * n_grid + g) * n_est + e];
    }

    void note(std::string text) {
        std::lock_guard lock(mutex_);
        notes_.push_back(std::move(text));
    }

    void execute(std::size_t index) {
        const Task& task = tasks_[index];
        const NamedScenario& sc = spec_.scenarios[task.scenario];
        const EstimatorSpec& est = spec_.estimators[task.estimator];
        const int k = est.k ? est.k : spec_.options.k;
        const std::string label = est.label(spec_.options.k);
        const std::uint64_t seed = est.kind == EstimatorSpec::Kind::MonteCarlo
                                       ? spec_.sim.seed
                                       : (is_sampled(est, k) ? spec_.options.seed : 0);

        for (std::size_t g : task.points) {
            Row& row = slot(task.scenario, g, task.estimator);
            row.scenario = sc.name;
            row.sweep_var = std::string(sweep_var_name(spec_.sweep.var));
            row.sweep_value = spec_.sweep.grid[g];
            row.estimator = label;
            row.seed = seed;
        }

        const auto t0 = Clock::now();
        try {
            if (est.kind == EstimatorSpec::Kind::MonteCarlo) {
                run_monte_carlo(task, sc);
            } else {
                const std::size_t g = task.points.front();
                Row& row = slot(task.scenario, g, task.estimator);
                const NetworkParams p = apply_sweep(sc.params, spec_.sweep.var, spec_.sweep.grid[g]);
                evaluate_bound(est, k, p, row);
            }
        } catch (const NumericalError& e) {
            fail(task, sc.name, label, e.what());
        } catch (const ConfigError&) {
            std::lock_guard lock(mutex_);
            if (!config_error_) config_error_ = std::current_exception();
        } catch (const std::exception& e) {
            fail(task, sc.name, label, e.what());
        }
        const double ms = spec_.output.timestamp ? elapsed_ms(t0) / static_cast<double>(task.points.size()) : 0.0;
        for (std::size_t g : task.points) slot(task.scenario, g, task.estimator).runtime_ms = ms;
    }

    void fail(const Task& task, const std::string& scenario, const std::string& label, const char* what) {
        for (std::size_t g : task.points) {
            Row& row = slot(task.scenario, g, task.estimator);
            row.value = kNaN;
            row.err = kNaN;
            note("numerical failure: " + scenario + " " + label + " at " +
                 std::string(sweep_var_name(spec_.sweep.var)) + "=" + format_number(spec_.sweep.grid[g]) + ": " +
                 what);
        }
        std::lock_guard lock(mutex_);
        result_.numerical_failure = true;
    }

    void evaluate_bound(const EstimatorSpec& est, int k, const NetworkParams& p, Row& row) {
        bounds::EstimatorOptions opts = spec_.options;
        opts.k = k;
        if (est.kind == EstimatorSpec::Kind::UbOverLb1) {
            const auto ub = bounds::coverage(bounds::Estimator::UbIndepHoles, p, spec_.quad, opts);
            const auto lb = bounds::coverage(bounds::Estimator::Lb1Closest, p, spec_.quad, opts);
            row.value = ub.value / lb.value;
            row.err = row.value * (ub.numeric_error / ub.value + lb.numeric_error / lb.value);
            return;
        }
        const auto r = bounds::coverage(est.tag, p, spec_.quad, opts);
        row.value = r.value;
        row.err = r.numeric_error;
    }

    void run_monte_carlo(const Task& task, const NamedScenario& sc) {
        montecarlo::SimConfig cfg = spec_.sim;
        cfg.threads = mc_threads_;
        const NetworkParams base = apply_sweep(sc.params, spec_.sweep.var, spec_.sweep.grid[task.points.front()]);
        const montecarlo::ReplicateDraws draws = montecarlo::draw_replicates(base, cfg);
        for (std::size_t g : task.points) {
            const NetworkParams p = apply_sweep(sc.params, spec_.sweep.var, spec_.sweep.grid[g]);
            const montecarlo::SimEstimate e = montecarlo::coverage_from_draws(draws, p, p.gamma);
            Row& row = slot(task.scenario, g, task.estimator);
            row.value = e.mean;
            row.err = e.std_error;
            const double bias = montecarlo::truncation_bias_bound(p, cfg, coverage_argument(p).s);
            note("MC truncation bias bound: " + sc.name + " " + std::string(sweep_var_name(spec_.sweep.var)) +
                 "=" + format_number(spec_.sweep.grid[g]) + ": " + format_number(bias));
        }
    }

    const RunSpec& spec_;
    std::vector<Task> tasks_;
    SweepResult result_;
    std::vector<std::string> notes_;
    std::mutex mutex_;
    std::exception_ptr config_error_;
    unsigned mc_threads_ = 0;
};

double parse_number(const std::string& field) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw ConfigError("bad number in CSV: '" + field + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

nlohmann::ordered_json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace

bool Row::operator==(const Row& o) const {
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return scenario == o.scenario && sweep_var == o.sweep_var && same(sweep_value, o.sweep_value) &&
           estimator == o.estimator && same(value, o.value) && same(err, o.err) &&
           same(runtime_ms, o.runtime_ms) && seed == o.seed;
}

SweepResult run(const RunSpec& spec) {
    validate(spec);
    return Runner(spec).run();
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream& out, const SweepResult& result, std::optional<std::string> timestamp) {
    if (timestamp) out << "# generated " << *timestamp << "\n";
    out << kCsvHeader << "\n";
    for (const Row& r : result.rows) {
        out << r.scenario << ',' << r.sweep_var << ',' << format_number(r.sweep_value) << ',' << r.estimator << ','
            << format_number(r.value) << ',' << format_number(r.err) << ',' << format_number(r.runtime_ms) << ','
            << r.seed << "\n";
    }
}

SweepResult read_csv(std::istream& in) {
    SweepResult result;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kCsvHeader) throw ConfigError("unexpected CSV header: " + line);
            header_seen = true;
            continue;
        }
        const auto f = split(line);
        if (f.size() != 8) throw ConfigError("CSV row must have 8 fields: " + line);
        Row r;
        r.scenario = f[0];
        r.sweep_var = f[1];
        r.sweep_value = parse_number(f[2]);
        r.estimator = f[3];
        r.value = parse_number(f[4]);
        r.err = parse_number(f[5]);
        r.runtime_ms = parse_number(f[6]);
        r.seed = std::stoull(f[7]);
        if (std::isnan(r.value)) result.numerical_failure = true;
        result.rows.push_back(std::move(r));
    }
    if (!header_seen) throw ConfigError("CSV has no header");
    return result;
}

void write_json(std::ostream& out, const SweepResult& result, std::optional<std::string> timestamp) {
    nlohmann::ordered_json j;
    if (timestamp) j["generated"] = *timestamp;
    j["rows"] = nlohmann::ordered_json::array();
    for (const Row& r : result.rows) {
        j["rows"].push_back({{"scenario", r.scenario},
                             {"sweep_var", r.sweep_var},
                             {"sweep_value", json_number(r.sweep_value)},
                             {"estimator", r.estimator},
                             {"value", json_number(r.value)},
                             {"err", json_number(r.err)},
                             {"runtime_ms", json_number(r.runtime_ms)},
                             {"seed", r.seed}});
    }
    j["notes"] = result.notes;
    j["numerical_failure"] = result.numerical_failure;
    out << j.dump(2) << "\n";
}

SweepResult rounded(const SweepResult& result) {
    SweepResult out = result;
    auto round12 = [](double x) { return std::isfinite(x) ? std::strtod(format_number(x).c_str(), nullptr) : x; };
    for (Row& r : out.rows) {
        r.sweep_value = round12(r.sweep_value);
        r.value = round12(r.value);
        r.err = round12(r.err);
        r.runtime_ms = round12(r.runtime_ms);
    }
    return out;
}

}  // namespace holefield::cli
