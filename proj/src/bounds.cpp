#include "holefield/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "holefield/chebyshev.hpp"
#include "holefield/errors.hpp"
#include "holefield/kernel.hpp"
#include "holefield/overlap.hpp"
#include "holefield/rng.hpp"

namespace holefield::bounds {

namespace q = quadrature;

namespace {

constexpr std::array<std::pair<Estimator, std::string_view>, 9> kTags{{
    {Estimator::PppLower, "PPP_LOWER"},
    {Estimator::Fosa, "FOSA"},
    {Estimator::CondSingleHole, "COND_SINGLE_HOLE"},
    {Estimator::Lb1Closest, "LB1_CLOSEST"},
    {Estimator::UbIndepHoles, "UB_INDEP_HOLES"},
    {Estimator::RatioApprox, "RATIO_APPROX"},
    {Estimator::Lb2TwoHoleExact, "LB2_TWO_HOLE_EXACT"},
    {Estimator::LbkKClosest, "LBK_K_CLOSEST"},
    {Estimator::OverlapMeanApprox, "OVERLAP_MEAN_APPROX"},
}};

// Distances of consecutive hole centers: pi lambda1 (V_j^2 - V_{j-1}^2) are
// i.i.d. unit exponentials, starting from V_0 = D.
double next_distance(double previous, double hole_rate, CounterRng& rng) {
    return std::sqrt(previous * previous + rng.exponential() / hole_rate);
}

// 2 pi lambda1 v exp(-pi lambda1 (v^2 - u^2)): density of the next hole
// distance beyond u.
double next_distance_pdf(double v, double u, double hole_rate) {
    return 2.0 * hole_rate * v * std::exp(-hole_rate * (v * v - u * u));
}

double initial_width(const NetworkParams& p) { return std::max(p.D, 0.5); }

void check_s(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("Laplace argument s must be finite and >= 0");
}

bool holes_vanish(const NetworkParams& p, double s) {
    return p.lambda1 <= 0.0 || p.D <= 0.0 || s * p.P <= 0.0;
}

LaplaceEstimate tagged(LaplaceEstimate e, Estimator tag) {
    e.estimator = tag;
    return e;
}

struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};

SampleStats summarize(std::span<const double> xs) {
    SampleStats st;
    if (xs.empty()) return st;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    st.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - st.mean) * (x - st.mean);
        st.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return st;
}

// Standard error reporting shared by the sampled estimators: below 1000
// samples the error is widened instead of failing.
double widened_error(double std_error, std::size_t samples, EstimateMeta& meta) {
    constexpr std::size_t kMinSamples = 1000;
    if (samples == 0) {
        meta.note += "no outer samples; value is the LB1 floor. ";
        return std::numeric_limits<double>::infinity();
    }
    if (samples < kMinSamples) {
        meta.note += "fewer than 1000 outer samples; error widened. ";
        return 3.0 * std::max(std_error, std::numeric_limits<double>::epsilon()) *
               std::sqrt(static_cast<double>(kMinSamples) / static_cast<double>(samples));
    }
    return std_error;
}

// ∫_D^inf pdf_closest(v) expm1(g(v)) dv, the closest-hole excess over the PPP.
q::QuadResult closest_hole_excess(double s, const NetworkParams& p, const q::QuadSpec& spec) {
    const double c = kPi * p.lambda1;
    auto integrand = [&](double v) {
        const double g = hole_kernel_integral(v, p.D, s, p.P, p.alpha, p.lambda2, {}, spec).value;
        return pdf_closest(v, p.lambda1, p.D) * std::expm1(g);
    };
    return q::integrate_semi_infinite(integrand, p.D, q::TailDecay::gaussian(c).with_power_law(p.alpha - 1.0),
                                      spec, initial_width(p));
}

// ∫_a^inf expm1(scale * f(v)) v dv for the independent-holes forms.
q::QuadResult independent_hole_integral(double a, double s, const NetworkParams& p, double scale,
                                        const q::QuadSpec& spec) {
    auto integrand = [&](double v) {
        const double f = hole_kernel_integral(v, p.D, s, p.P, p.alpha, p.lambda2, {}, spec).value;
        return std::expm1(scale * f) * v;
    };
    return q::integrate_semi_infinite(integrand, a, q::TailDecay::power_law(p.alpha - 1.0), spec,
                                      initial_width(p));
}

LaplaceEstimate independent_holes_form(double s, const NetworkParams& p, double scale,
                                       const q::QuadSpec& spec) {
    LaplaceEstimate e = laplace_ppp(s, p.lambda2, p.P, p.alpha);
    if (holes_vanish(p, s)) return e;
    const q::QuadResult r = independent_hole_integral(p.D, s, p, scale, spec);
    const double exponent = 2.0 * kPi * p.lambda1 * r.value;
    e.value *= std::exp(exponent);
    e.numeric_error = e.value * 2.0 * kPi * p.lambda1 * r.error_estimate;
    return e;
}

// M_j(u) - 1 for the k-closest chain: the expected extra removal by hole j
// and, through `deeper` (M_{j+1} - 1), by the holes after it, given hole j-1
// sits at distance u.
q::QuadResult chain_excess(double u, double s, const NetworkParams& p, const q::QuadSpec& spec,
                           const std::function<double(double)>* deeper) {
    const double c = kPi * p.lambda1;
    auto integrand = [&](double v) {
        const double kv =
            hole_kernel_integral(v, p.D, s, p.P, p.alpha, p.lambda2, u + p.D, spec).value;
        double val = std::expm1(kv);
        if (deeper) val += std::exp(kv) * (*deeper)(v);
        return next_distance_pdf(v, u, c) * val;
    };
    const std::array<double, 1> kink{u + 2.0 * p.D};
    return q::integrate_semi_infinite(integrand, u,
                                      q::TailDecay::gaussian(c).with_power_law(p.alpha - 1.0), spec,
                                      2.0 * p.D, kink);
}

// Map scale for tabulating chain levels over u in [D, inf).
double chain_table_scale(const NetworkParams& p) {
    return 2.0 * p.D + 1.0 / std::sqrt(kPi * p.lambda1);
}

}  // namespace

std::string_view estimator_tag(Estimator e) {
    for (const auto& [est, tag] : kTags) {
        if (est == e) return tag;
    }
    return "UNKNOWN";
}

std::optional<Estimator> parse_estimator_tag(std::string_view tag) {
    for (const auto& [est, name] : kTags) {
        if (name == tag) return est;
    }
    return std::nullopt;
}

LaplaceEstimate laplace_ppp(double s, double lambda, double P, double alpha) {
    check_s(s);
    if (!(alpha > 2.0)) throw ConfigError("alpha must exceed 2");
    LaplaceEstimate e;
    e.estimator = Estimator::PppLower;
    const double sP = s * P;
    e.value = sP <= 0.0 ? 1.0 : std::exp(-kPi * lambda * std::pow(sP, 2.0 / alpha) / sinc(2.0 / alpha));
    return e;
}

double density_php(double lambda1, double lambda2, double D) {
    return lambda2 * std::exp(-lambda1 * kPi * D * D);
}

LaplaceEstimate laplace_fosa(double s, const NetworkParams& p) {
    return tagged(laplace_ppp(s, density_php(p.lambda1, p.lambda2, p.D), p.P, p.alpha), Estimator::Fosa);
}

double pdf_closest(double v1, double lambda1, double D) {
    if (v1 < D) return 0.0;
    const double c = kPi * lambda1;
    return 2.0 * c * v1 * std::exp(-c * (v1 * v1 - D * D));
}

double joint_pdf_ordered(std::span<const double> v, double lambda1, double D) {
    if (v.empty()) return 0.0;
    if (!(v.front() >= D)) return 0.0;
    double product = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0 && !(v[i] > v[i - 1])) return 0.0;
        product *= 2.0 * kPi * lambda1 * v[i];
    }
    return product * std::exp(-kPi * lambda1 * (v.back() * v.back() - D * D));
}

q::QuadResult hole_kernel_integral(double v, double D, double s, double P, double alpha,
                                   double lambda2, std::optional<double> r_lo,
                                   const q::QuadSpec& spec) {
    const double sP = s * P;
    if (D <= 0.0 || sP <= 0.0 || lambda2 <= 0.0 || v < 0.0) return {};
    const double lower = r_lo.value_or(0.0);
    if (lower >= v + D) return {};
    const double knee = kernel_knee(sP, alpha);

    q::QuadResult out;
    if (v >= D) {
        // r = v - D cos t turns the square-root edges of the arccos weight at
        // r = v -/+ D into smooth behaviour in t.
        const double t_lo = lower > v - D ? std::acos(std::clamp((v - lower) / D, -1.0, 1.0)) : 0.0;
        auto integrand = [&](double t) {
            const double st = std::sin(t);
            const double r = v - D * std::cos(t);
            if (r <= 0.0) return 0.0;
            const double theta = 2.0 * std::atan2(D * st, std::sqrt(std::max(0.0, (r + v - D) * (r + v + D))));
            return theta * interference_kernel(r, sP, alpha) * r * D * st;
        };
        std::array<double, 1> split{-1.0};
        if (knee > v - D && knee < v + D) split[0] = std::acos(std::clamp((v - knee) / D, -1.0, 1.0));
        out = q::integrate(integrand, t_lo, kPi, split, spec);
    } else {
        // The hole covers the origin: full circles out to D - v, arcs beyond.
        const double inner_edge = D - v;
        auto full = [&](double r) { return kPi * interference_kernel(r, sP, alpha) * r; };
        auto arc = [&](double r) {
            const double a = std::sqrt(std::max(0.0, D * D - (r - v) * (r - v)));
            const double b = std::sqrt(std::max(0.0, (r + v) * (r + v) - D * D));
            return 2.0 * std::atan2(a, b) * interference_kernel(r, sP, alpha) * r;
        };
        const std::array<double, 1> split{knee};
        if (lower < inner_edge) {
            const q::QuadResult a = q::integrate(full, lower, inner_edge, split, spec);
            out.value += a.value;
            out.error_estimate += a.error_estimate;
            out.evaluations += a.evaluations;
        }
        if (v > 0.0) {
            const q::QuadResult b = q::integrate(arc, std::max(lower, inner_edge), v + D, split, spec);
            out.value += b.value;
            out.error_estimate += b.error_estimate;
            out.evaluations += b.evaluations;
        }
    }
    out.value *= 2.0 * lambda2;
    out.error_estimate *= 2.0 * lambda2;
    return out;
}

LaplaceEstimate laplace_single_hole_conditional(double s, double v, const NetworkParams& p,
                                                const q::QuadSpec& spec) {
    LaplaceEstimate e = laplace_ppp(s, p.lambda2, p.P, p.alpha);
    e.estimator = Estimator::CondSingleHole;
    const q::QuadResult g = hole_kernel_integral(v, p.D, s, p.P, p.alpha, p.lambda2, {}, spec);
    e.value *= std::exp(g.value);
    e.numeric_error = e.value * g.error_estimate;
    return e;
}

LaplaceEstimate laplace_lb1(double s, const NetworkParams& p, const q::QuadSpec& spec) {
    LaplaceEstimate e = tagged(laplace_ppp(s, p.lambda2, p.P, p.alpha), Estimator::Lb1Closest);
    e.meta.k = 1;
    if (holes_vanish(p, s)) return e;
    const q::QuadResult excess = closest_hole_excess(s, p, spec);
    e.numeric_error = e.value * excess.error_estimate;
    e.value *= 1.0 + excess.value;
    return e;
}

LaplaceEstimate laplace_ub(double s, const NetworkParams& p, const q::QuadSpec& spec) {
    return tagged(independent_holes_form(s, p, 1.0, spec), Estimator::UbIndepHoles);
}

LaplaceEstimate ratio_approx(double s, const NetworkParams& p, const q::QuadSpec& spec) {
    check_s(s);
    LaplaceEstimate e;
    e.estimator = Estimator::RatioApprox;
    e.value = 1.0;
    if (holes_vanish(p, s)) return e;
    const double c = kPi * p.lambda1;
    double inner_error = 0.0;
    auto integrand = [&](double v1) {
        const q::QuadResult tail = independent_hole_integral(v1, s, p, 1.0, spec);
        inner_error = std::max(inner_error, tail.error_estimate);
        return pdf_closest(v1, p.lambda1, p.D) * std::expm1(2.0 * kPi * p.lambda1 * tail.value);
    };
    q::TailDecay decay = q::TailDecay::gaussian(c);
    if (p.alpha - 3.0 > 1.0) decay = decay.with_power_law(p.alpha - 3.0);
    const q::QuadResult r = q::integrate_semi_infinite(integrand, p.D, decay, spec, initial_width(p));
    e.value = 1.0 + r.value;
    e.numeric_error = r.error_estimate + e.value * 2.0 * kPi * p.lambda1 * inner_error;
    e.meta.note = "approximation of UB/LB1, not a bound";
    return e;
}

LaplaceEstimate laplace_lb2_two_hole(double s, const NetworkParams& p, const q::QuadSpec& spec,
                                     std::size_t outer_samples, std::uint64_t seed) {
    LaplaceEstimate e = tagged(laplace_ppp(s, p.lambda2, p.P, p.alpha), Estimator::Lb2TwoHoleExact);
    e.meta.k = 2;
    e.meta.samples = outer_samples;
    e.meta.seed = seed;
    e.meta.note = "sampled outer expectation: a lower bound in expectation. ";
    if (holes_vanish(p, s)) return e;

    const q::QuadResult excess = closest_hole_excess(s, p, spec);
    const double c = kPi * p.lambda1;
    std::vector<double> samples(outer_samples);
    for (std::size_t i = 0; i < outer_samples; ++i) {
        CounterRng rng(seed, i);
        const double v1 = next_distance(p.D, c, rng);
        const double v2 = next_distance(v1, c, rng);
        const double phi = kPi * (2.0 * rng.uniform() - 1.0);
        const double g1 = hole_kernel_integral(v1, p.D, s, p.P, p.alpha, p.lambda2, {}, spec).value;
        const double g2 = hole_kernel_integral(v2, p.D, s, p.P, p.alpha, p.lambda2, {}, spec).value;
        const double lens =
            overlap::overlap_kernel_integral({v1, v2, phi, p.D}, s, p.P, p.alpha, spec).value;
        // The second hole never removes less than nothing.
        const double second = std::max(0.0, g2 - p.lambda2 * lens);
        samples[i] = std::exp(g1) * std::expm1(second);
    }
    const SampleStats st = summarize(samples);
    const double ppp = e.value;
    e.value = ppp * (1.0 + excess.value + st.mean);
    e.numeric_error = ppp * (widened_error(st.std_error, outer_samples, e.meta) + excess.error_estimate);
    return e;
}

LaplaceEstimate laplace_lbk(double s, const NetworkParams& p, int k, const q::QuadSpec& spec,
                            std::size_t outer_samples, std::uint64_t seed) {
    if (k < 1 || k > 8) throw ConfigError("k must be between 1 and 8");
    LaplaceEstimate e = tagged(laplace_ppp(s, p.lambda2, p.P, p.alpha), Estimator::LbkKClosest);
    e.meta.k = k;
    if (holes_vanish(p, s)) return e;
    const double ppp = e.value;
    const double c = kPi * p.lambda1;

    if (k <= 3) {
        // The last level is tabulated in u, the levels above it integrate
        // against the table.
        std::optional<q::HalfLineChebyshev> table;
        std::function<double(double)> last;
        double table_error = 0.0;
        if (k == 3) {
            table.emplace(
                [&](double u) { return chain_excess(u, s, p, spec, nullptr).value; }, p.D,
                chain_table_scale(p), std::max(spec.abs_tol, 1e-3 * spec.rel_tol));
            table_error = table->error_estimate();
            last = [&](double u) { return (*table)(u); };
        }
        double inner_error = 0.0;
        auto integrand = [&](double v1) {
            const double g = hole_kernel_integral(v1, p.D, s, p.P, p.alpha, p.lambda2, {}, spec).value;
            double val = std::expm1(g);
            if (k >= 2) {
                const q::QuadResult chain = chain_excess(v1, s, p, spec, k == 3 ? &last : nullptr);
                inner_error = std::max(inner_error, chain.error_estimate);
                val += std::exp(g) * chain.value;
            }
            return pdf_closest(v1, p.lambda1, p.D) * val;
        };
        const q::QuadResult r = q::integrate_semi_infinite(
            integrand, p.D, q::TailDecay::gaussian(c).with_power_law(p.alpha - 1.0), spec,
            initial_width(p));
        e.value = ppp * (1.0 + r.value);
        e.numeric_error = ppp * (r.error_estimate + inner_error + table_error);
        if (table) e.meta.note = "last level tabulated with " + std::to_string(table->nodes()) + " Chebyshev nodes. ";
        return e;
    }

    // Sampled chain; the closest-hole part is exact, as in LB2.
    e.meta.samples = outer_samples;
    e.meta.seed = seed;
    e.meta.note = "sampled outer expectation: a lower bound in expectation. ";
    const q::QuadResult excess = closest_hole_excess(s, p, spec);
    std::vector<double> samples(outer_samples);
    for (std::size_t i = 0; i < outer_samples; ++i) {
        CounterRng rng(seed, i);
        double prev = next_distance(p.D, c, rng);
        const double g1 = hole_kernel_integral(prev, p.D, s, p.P, p.alpha, p.lambda2, {}, spec).value;
        double rest = 0.0;
        for (int j = 2; j <= k; ++j) {
            const double v = next_distance(prev, c, rng);
            rest += hole_kernel_integral(v, p.D, s, p.P, p.alpha, p.lambda2, prev + p.D, spec).value;
            prev = v;
        }
        samples[i] = std::exp(g1) * std::expm1(rest);
    }
    const SampleStats st = summarize(samples);
    e.value = ppp * (1.0 + excess.value + st.mean);
    e.numeric_error = ppp * (widened_error(st.std_error, outer_samples, e.meta) + excess.error_estimate);
    return e;
}

LaplaceEstimate laplace_overlap_approx(double s, const NetworkParams& p, const q::QuadSpec& spec) {
    double scale = 1.0;
    if (p.D > 0.0) scale = 1.0 - overlap::mean_overlap_area(p.lambda1, p.D) / (2.0 * kPi * p.D * p.D);
    return tagged(independent_holes_form(s, p, scale, spec), Estimator::OverlapMeanApprox);
}

LaplaceEstimate evaluate(Estimator est, double s, const NetworkParams& p, const q::QuadSpec& spec,
                         const EstimatorOptions& opt) {
    switch (est) {
        case Estimator::PppLower: return laplace_ppp(s, p.lambda2, p.P, p.alpha);
        case Estimator::Fosa: return laplace_fosa(s, p);
        case Estimator::CondSingleHole:
            if (!opt.hole_distance) {
                throw ConfigError("COND_SINGLE_HOLE needs a hole distance");
            }
            return laplace_single_hole_conditional(s, *opt.hole_distance, p, spec);
        case Estimator::Lb1Closest: return laplace_lb1(s, p, spec);
        case Estimator::UbIndepHoles: return laplace_ub(s, p, spec);
        case Estimator::RatioApprox: return ratio_approx(s, p, spec);
        case Estimator::Lb2TwoHoleExact:
            return laplace_lb2_two_hole(s, p, spec, opt.outer_samples, opt.seed);
        case Estimator::LbkKClosest: return laplace_lbk(s, p, opt.k, spec, opt.outer_samples, opt.seed);
        case Estimator::OverlapMeanApprox: return laplace_overlap_approx(s, p, spec);
    }
    throw ConfigError("unknown estimator");
}

LaplaceEstimate coverage(Estimator est, const NetworkParams& p, const q::QuadSpec& spec,
                         const EstimatorOptions& opt) {
    return evaluate(est, coverage_argument(p).s, p, spec, opt);
}

}  // namespace holefield::bounds
