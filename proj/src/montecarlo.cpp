#include "holefield/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "holefield/errors.hpp"

namespace holefield::montecarlo {

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

template <class F>
SimEstimate average(std::size_t n, F&& sample) {
    SimEstimate est;
    est.n = n;
    if (n == 0) return est;
    CompensatedSum s1;
    for (std::size_t i = 0; i < n; ++i) s1.add(sample(i));
    est.mean = s1.value() / static_cast<double>(n);
    if (n > 1) {
        CompensatedSum s2;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = sample(i) - est.mean;
            s2.add(d * d);
        }
        est.std_error = std::sqrt(s2.value() / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return est;
}

std::size_t poisson_count(double mean, CounterRng& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::size_t> dist(mean);
    return dist(rng);
}

double path_loss(double r2, double alpha) {
    if (alpha == 4.0) return 1.0 / (r2 * r2);
    return std::pow(r2, -0.5 * alpha);
}

// Uniform bucket grid over the hole centers; cells are at least D wide so a
// point only needs its own cell and the eight around it.
class HoleGrid {
public:
    HoleGrid(std::span<const Point> centers, double D, double extent) : D2_(D * D) {
        origin_ = -extent;
        const double span = 2.0 * extent;
        cell_ = std::max(D, span / 1024.0);
        cells_ = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(std::ceil(span / cell_)));
        start_.assign(static_cast<std::size_t>(cells_ * cells_) + 1, 0);
        std::vector<std::size_t> cell_of(centers.size());
        for (std::size_t i = 0; i < centers.size(); ++i) {
            cell_of[i] = index(cell_coord(centers[i].x), cell_coord(centers[i].y));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
        items_.resize(centers.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < centers.size(); ++i) items_[fill[cell_of[i]]++] = centers[i];
    }

    bool covered(const Point& p) const {
        const std::ptrdiff_t cx = cell_coord(p.x);
        const std::ptrdiff_t cy = cell_coord(p.y);
        for (std::ptrdiff_t gx = std::max<std::ptrdiff_t>(0, cx - 1); gx <= std::min(cells_ - 1, cx + 1); ++gx) {
            for (std::ptrdiff_t gy = std::max<std::ptrdiff_t>(0, cy - 1); gy <= std::min(cells_ - 1, cy + 1);
                 ++gy) {
                const std::size_t c = index(gx, gy);
                for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) {
                    const double dx = p.x - items_[k].x;
                    const double dy = p.y - items_[k].y;
                    if (dx * dx + dy * dy < D2_) return true;
                }
            }
        }
        return false;
    }

private:
    std::ptrdiff_t cell_coord(double v) const {
        const auto c = static_cast<std::ptrdiff_t>(std::floor((v - origin_) / cell_));
        return std::clamp<std::ptrdiff_t>(c, 0, cells_ - 1);
    }
    std::size_t index(std::ptrdiff_t cx, std::ptrdiff_t cy) const {
        return static_cast<std::size_t>(cx * cells_ + cy);
    }

    double D2_;
    double origin_ = 0.0;
    double cell_ = 1.0;
    std::ptrdiff_t cells_ = 1;
    std::vector<std::size_t> start_;
    std::vector<Point> items_;
};

}  // namespace

void validate(const SimConfig& c, const NetworkParams& params) {
    validate(params);
    if (!(c.window_radius > 0.0) || !std::isfinite(c.window_radius))
        throw ConfigError("window_radius must be finite and > 0");
    if (c.iterations < 1) throw ConfigError("iterations must be >= 1");
    const double hole_r = c.hole_radius_for(params);
    if (!(hole_r >= c.window_radius) || !std::isfinite(hole_r))
        throw ConfigError("hole_window_radius must be finite and >= window_radius");
    for (double s : c.s_values)
        if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("s values must be finite and >= 0");
    for (double g : c.gamma_values)
        if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("gamma values must be finite and >= 0");
}

std::vector<Point> sample_ppp_annulus(double lambda, double r_in, double r_out, CounterRng& rng) {
    if (lambda < 0.0 || r_in < 0.0 || r_out < r_in) throw ConfigError("invalid annulus sampling request");
    const double a_in = r_in * r_in;
    const double a_out = r_out * r_out;
    const std::size_t n = poisson_count(lambda * kPi * (a_out - a_in), rng);
    std::vector<Point> pts(n);
    for (auto& p : pts) {
        const double r = std::sqrt(a_in + (a_out - a_in) * rng.uniform());
        const double t = 2.0 * kPi * rng.uniform();
        p = {r * std::cos(t), r * std::sin(t)};
    }
    return pts;
}

std::vector<Point> sample_ppp_disk(double lambda, double radius, CounterRng& rng) {
    if (!(radius > 0.0)) throw ConfigError("disk radius must be > 0");
    return sample_ppp_annulus(lambda, 0.0, radius, rng);
}

std::vector<std::size_t> outside_holes(std::span<const Point> points, std::span<const Point> centers,
                                       double D) {
    std::vector<std::size_t> kept;
    kept.reserve(points.size());
    if (centers.empty() || D <= 0.0) {
        for (std::size_t i = 0; i < points.size(); ++i) kept.push_back(i);
        return kept;
    }
    double extent = D;
    for (const auto& c : centers) extent = std::max({extent, std::abs(c.x), std::abs(c.y)});
    const HoleGrid grid(centers, D, extent + D);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!grid.covered(points[i])) kept.push_back(i);
    return kept;
}

PhpRealization sample_php_realization(const NetworkParams& params, const SimConfig& config,
                                      CounterRng& rng) {
    PhpRealization r;
    r.holes = sample_ppp_annulus(params.lambda1, params.D, config.hole_radius_for(params), rng);
    r.base_points = sample_ppp_disk(params.lambda2, config.window_radius, rng);
    r.retained = outside_holes(r.base_points, r.holes, params.D);
    return r;
}

double interference(const PhpRealization& realization, const NetworkParams& params,
                    std::span<const double> fades) {
    if (fades.size() != realization.retained.size())
        throw ConfigError("one fade per retained point is required");
    double total = 0.0;
    for (std::size_t k = 0; k < fades.size(); ++k) {
        const Point& x = realization.base_points[realization.retained[k]];
        total += params.P * fades[k] * path_loss(x.x * x.x + x.y * x.y, params.alpha);
    }
    return total;
}

double interference(const PhpRealization& realization, const NetworkParams& params, CounterRng& rng) {
    double total = 0.0;
    for (std::size_t idx : realization.retained) {
        const Point& x = realization.base_points[idx];
        total += params.P * rng.exponential() * path_loss(x.x * x.x + x.y * x.y, params.alpha);
    }
    return total;
}

ReplicateDraws draw_replicates(const NetworkParams& params, const SimConfig& config) {
    validate(config, params);
    const std::size_t n = config.iterations;
    ReplicateDraws d;
    d.interference.resize(n);
    d.serving_fade.resize(n);

    auto run_one = [&](std::size_t i) {
        CounterRng rng(config.seed, i);
        d.serving_fade[i] = rng.exponential();
        while (true) {
            const PhpRealization real = sample_php_realization(params, config, rng);
            const double I = interference(real, params, rng);
            // A retained point exactly at the origin has probability zero.
            if (std::isfinite(I)) {
                d.interference[i] = I;
                break;
            }
        }
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
        return d;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) run_one(i);
        });
    }
    for (auto& th : pool) th.join();
    return d;
}

SimEstimate laplace_from_draws(const ReplicateDraws& draws, double s) {
    return average(draws.interference.size(), [&](std::size_t i) { return std::exp(-s * draws.interference[i]); });
}

SimEstimate coverage_from_draws(const ReplicateDraws& draws, const NetworkParams& params, double gamma) {
    const double signal_scale = params.P * std::pow(params.r0, -params.alpha);
    return average(draws.interference.size(), [&](std::size_t i) {
        return signal_scale * draws.serving_fade[i] > gamma * draws.interference[i] ? 1.0 : 0.0;
    });
}

SimEstimate empirical_laplace(const NetworkParams& params, const SimConfig& config, double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("s must be finite and >= 0");
    if (s == 0.0) {
        validate(config, params);
        return {1.0, 0.0, config.iterations};
    }
    return laplace_from_draws(draw_replicates(params, config), s);
}

SimEstimate empirical_coverage(const NetworkParams& params, const SimConfig& config) {
    return coverage_from_draws(draw_replicates(params, config), params, params.gamma);
}

SweepEstimates simulate(const NetworkParams& params, const SimConfig& config) {
    const ReplicateDraws draws = draw_replicates(params, config);
    SweepEstimates out;
    for (double s : config.s_values) out.laplace.push_back(laplace_from_draws(draws, s));
    for (double g : config.gamma_values) out.coverage.push_back(coverage_from_draws(draws, params, g));
    return out;
}

double truncation_bias_bound(const NetworkParams& params, const SimConfig& config, double s) {
    if (params.alpha <= 2.0) return std::numeric_limits<double>::infinity();
    return s * params.P * params.lambda2 * 2.0 * kPi * std::pow(config.window_radius, 2.0 - params.alpha) /
           (params.alpha - 2.0);
}

}  // namespace holefield::montecarlo
