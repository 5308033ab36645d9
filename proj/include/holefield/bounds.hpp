#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holefield/model.hpp"
#include "holefield/quadrature.hpp"

namespace holefield::bounds {

enum class Estimator {
    PppLower,            // baseline PPP, holes ignored
    Fosa,                // PPP thinned to the hole-process density
    CondSingleHole,      // one hole at a given distance
    Lb1Closest,          // closest hole only
    UbIndepHoles,        // every hole carved independently
    RatioApprox,         // approximation of UB / LB1
    Lb2TwoHoleExact,     // two closest holes with their exact overlap
    LbkKClosest,         // k closest holes, overlaps trimmed by annuli
    OverlapMeanApprox,   // UB with the mean pairwise overlap compensated
};

std::string_view estimator_tag(Estimator e);  // "PPP_LOWER", "LB1_CLOSEST", ...
std::optional<Estimator> parse_estimator_tag(std::string_view tag);

struct EstimateMeta {
    int k = 0;                  // holes considered (LBK, LB2)
    std::size_t samples = 0;    // outer Monte Carlo samples, sampled estimators only
    std::uint64_t seed = 0;
    std::string note;
};

/// A value of the Laplace transform of the interference and how it was obtained.
/// numeric_error is a quadrature error estimate, or a standard error for the
/// sampled estimators.
struct LaplaceEstimate {
    double value = 1.0;
    Estimator estimator = Estimator::PppLower;
    double numeric_error = 0.0;
    EstimateMeta meta;
};

/// Knobs for the estimators that need more than (s, params, spec).
struct EstimatorOptions {
    int k = 2;                               // LBK
    std::optional<double> hole_distance;     // COND_SINGLE_HOLE
    std::size_t outer_samples = 20000;       // LB2, LBK with k > 3
    std::uint64_t seed = 0x5eed;
};

// ---- closed forms ----------------------------------------------------------

/// exp(-pi lambda (sP)^(2/alpha) / sinc(2/alpha)).
LaplaceEstimate laplace_ppp(double s, double lambda, double P, double alpha);

/// lambda2 exp(-lambda1 pi D^2).
double density_php(double lambda1, double lambda2, double D);

LaplaceEstimate laplace_fosa(double s, const NetworkParams& params);

// ---- distances to the nearest holes ---------------------------------------

/// Density of the distance to the closest hole center, given none lies within D.
double pdf_closest(double v1, double lambda1, double D);

/// Joint density of the ordered distances D < v1 < ... < vk; 0 off the simplex.
double joint_pdf_ordered(std::span<const double> v, double lambda1, double D);

// ---- single-hole kernel ----------------------------------------------------

/// 2 lambda2 ∫ arccos((r^2 + v^2 - D^2) / (2 v r)) r / (1 + r^alpha/(sP)) dr
/// over [max(v - D, r_lo), v + D]: the interference removed by a hole of radius
/// D whose center is v away, optionally keeping only the part beyond r_lo.
/// Equals lambda2 times the kernel integrated over the (truncated) disk. Holes
/// covering the origin (v < D) are supported.
quadrature::QuadResult hole_kernel_integral(double v, double D, double s, double P, double alpha,
                                            double lambda2, std::optional<double> r_lo = {},
                                            const quadrature::QuadSpec& spec = {});

LaplaceEstimate laplace_single_hole_conditional(double s, double v, const NetworkParams& params,
                                                const quadrature::QuadSpec& spec = {});

// ---- bounds and approximations --------------------------------------------

LaplaceEstimate laplace_lb1(double s, const NetworkParams& params,
                            const quadrature::QuadSpec& spec = {});

LaplaceEstimate laplace_ub(double s, const NetworkParams& params,
                           const quadrature::QuadSpec& spec = {});

/// Approximates laplace_ub / laplace_lb1; always >= 1 and never a bound.
LaplaceEstimate ratio_approx(double s, const NetworkParams& params,
                             const quadrature::QuadSpec& spec = {});

/// Two closest holes with their exact overlap. The outer expectation over
/// (v1, v2, phi) is sampled with a fixed seed; the closest-hole part is taken
/// exactly from laplace_lb1's integral and only the non-negative second-hole
/// excess is averaged, so the result never drops below LB1. numeric_error is
/// the standard error of that average plus the quadrature error.
LaplaceEstimate laplace_lb2_two_hole(double s, const NetworkParams& params,
                                     const quadrature::QuadSpec& spec = {},
                                     std::size_t outer_samples = 20000, std::uint64_t seed = 0x5eed);

/// k closest holes, hole i trimmed to radii beyond max(v_i - D, v_{i-1} + D).
/// k <= 3 uses nested quadrature (the distances form a Markov chain, so each
/// level is a one-dimensional integral); 4 <= k <= 8 samples the chain.
LaplaceEstimate laplace_lbk(double s, const NetworkParams& params, int k,
                            const quadrature::QuadSpec& spec = {}, std::size_t outer_samples = 20000,
                            std::uint64_t seed = 0x5eed);

/// Upper-bound form with every hole's removal scaled by
/// 1 - min(lambda1 pi D^2 / 2, 1/2).
LaplaceEstimate laplace_overlap_approx(double s, const NetworkParams& params,
                                       const quadrature::QuadSpec& spec = {});

/// Dispatches on the tag. CondSingleHole needs options.hole_distance.
LaplaceEstimate evaluate(Estimator e, double s, const NetworkParams& params,
                         const quadrature::QuadSpec& spec = {}, const EstimatorOptions& options = {});

/// The estimator at s = gamma r0^alpha / P, i.e. the SIR coverage probability
/// (or the bound/approximation thereof).
LaplaceEstimate coverage(Estimator e, const NetworkParams& params,
                         const quadrature::QuadSpec& spec = {}, const EstimatorOptions& options = {});

}  // namespace holefield::bounds
