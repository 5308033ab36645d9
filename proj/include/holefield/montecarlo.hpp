#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "holefield/model.hpp"
#include "holefield/overlap.hpp"
#include "holefield/rng.hpp"

namespace holefield::montecarlo {

using overlap::Point;

struct SimConfig {
    double window_radius = 40.0;
    std::optional<double> hole_window_radius;   // defaults to window_radius + D
    std::size_t iterations = 50000;
    std::uint64_t seed = 0x5eed;
    std::vector<double> s_values;       // Laplace arguments for simulate()
    std::vector<double> gamma_values;   // linear SIR thresholds for simulate()
    unsigned threads = 0;               // 0: hardware concurrency

    double hole_radius_for(const NetworkParams& params) const {
        return hole_window_radius.value_or(window_radius + params.D);
    }
};

/// Throws ConfigError on a non-positive window, zero iterations, a hole
/// window smaller than the interferer window, or negative sweep values.
void validate(const SimConfig& config, const NetworkParams& params);

struct PhpRealization {
    std::vector<Point> holes;          // hole centers, all at distance >= D
    std::vector<Point> base_points;    // baseline field inside the window
    std::vector<std::size_t> retained; // indices of base points outside every hole
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Poisson(lambda pi R^2) points, uniform on the disk of radius R.
std::vector<Point> sample_ppp_disk(double lambda, double radius, CounterRng& rng);

/// Poisson points on the annulus r_in <= |x| <= r_out.
std::vector<Point> sample_ppp_annulus(double lambda, double r_in, double r_out, CounterRng& rng);

/// Indices of the points lying outside every disk of radius D around a center.
std::vector<std::size_t> outside_holes(std::span<const Point> points, std::span<const Point> centers,
                                       double D);

PhpRealization sample_php_realization(const NetworkParams& params, const SimConfig& config,
                                      CounterRng& rng);

/// Sum over retained points of P h |x|^-alpha with unit-mean exponential h.
double interference(const PhpRealization& realization, const NetworkParams& params, CounterRng& rng);

/// Same sum with the fades given, one per retained point.
double interference(const PhpRealization& realization, const NetworkParams& params,
                    std::span<const double> fades);

/// Per-replicate draws: the interference and the serving-link fade.
struct ReplicateDraws {
    std::vector<double> interference;
    std::vector<double> serving_fade;
};

/// Runs config.iterations replicates. Replicate i uses the stream
/// (config.seed, i) so the draws do not depend on the thread count.
ReplicateDraws draw_replicates(const NetworkParams& params, const SimConfig& config);

SimEstimate laplace_from_draws(const ReplicateDraws& draws, double s);

/// Coverage at linear threshold gamma: 1{P h r0^-alpha > gamma I}.
SimEstimate coverage_from_draws(const ReplicateDraws& draws, const NetworkParams& params, double gamma);

SimEstimate empirical_laplace(const NetworkParams& params, const SimConfig& config, double s);

/// Coverage at params.gamma.
SimEstimate empirical_coverage(const NetworkParams& params, const SimConfig& config);

struct SweepEstimates {
    std::vector<SimEstimate> laplace;   // one per config.s_values
    std::vector<SimEstimate> coverage;  // one per config.gamma_values
};

/// Evaluates every s and gamma in the config on one set of replicates.
SweepEstimates simulate(const NetworkParams& params, const SimConfig& config);

/// Upper bound on the bias of the Laplace estimate from dropping interferers
/// beyond the window: s P lambda2 2 pi R^(2-alpha) / (alpha - 2).
double truncation_bias_bound(const NetworkParams& params, const SimConfig& config, double s);

}  // namespace holefield::montecarlo
