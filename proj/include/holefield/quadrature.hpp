#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace holefield::quadrature {

using Integrand = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

struct QuadSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Throws ConfigError for non-positive tolerances or max_subdivisions < 1.
void validate(const QuadSpec& spec);

/// Globally adaptive Gauss-Kronrod (10/21) on [a, b]. The panel with the
/// largest error estimate is bisected until the total error is below
/// max(abs_tol, rel_tol * |value|). Running out of subdivisions throws
/// NumericalError carrying the partial result.
QuadResult integrate(const Integrand& f, double a, double b, const QuadSpec& spec = {});

/// Same, but the initial panels are split at `breakpoints` (kinks or jumps of
/// f). Points outside [a, b] are ignored; the list need not be sorted.
QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                     const QuadSpec& spec = {});

/// Majorant family for the tail of a semi-infinite integrand. Given the value
/// at the current truncation point b, each kind bounds |f(v)| for v >= b:
///   PowerLaw(p):     |f(b)| (b/v)^p                 tail <= |f(b)| b / (p - 1)
///   Exponential(c):  |f(b)| exp(-c (v - b))         tail <= |f(b)| / c
///   Gaussian(c):     |f(b)| (v/b) exp(-c (v^2-b^2)) tail <= |f(b)| / (2 c b)
/// The Gaussian form matches pdf-weighted integrands v exp(-c v^2) g(v) with g
/// non-increasing. A secondary power-law exponent, when set, also holds and the
/// smaller of the two bounds is used.
struct TailDecay {
    enum class Kind { PowerLaw, Exponential, Gaussian };
    Kind kind = Kind::PowerLaw;
    double rate = 2.0;
    double power_exponent = 0.0;  // secondary majorant; 0 = none
    double safety = 2.0;          // multiplies the bound

    static TailDecay power_law(double exponent) { return {Kind::PowerLaw, exponent, 0.0, 2.0}; }
    static TailDecay exponential(double rate) { return {Kind::Exponential, rate, 0.0, 2.0}; }
    static TailDecay gaussian(double rate) { return {Kind::Gaussian, rate, 0.0, 2.0}; }

    TailDecay with_power_law(double exponent) const {
        TailDecay t = *this;
        t.power_exponent = exponent;
        return t;
    }

    /// Bound on the integral of |f| over [b, inf) given |f(b)|.
    double tail_bound(double b, double abs_fb) const;
};

/// Integrates f over [a, inf). The truncation point grows by doubling the
/// distance from `a` (starting at `initial_width`) until the tail majorant
/// drops below the tolerance; every new piece is integrated adaptively and
/// may be split at `breakpoints`. More than 60 doublings throws NumericalError.
QuadResult integrate_semi_infinite(const Integrand& f, double a, const TailDecay& decay,
                                   const QuadSpec& spec = {}, double initial_width = 1.0,
                                   std::span<const double> breakpoints = {});

/// Nested adaptive integration over {x in [x_lo, x_hi], y_lo(x) <= y <= y_hi(x)};
/// inner in y, outer in x. Where y_hi(x) <= y_lo(x) the inner integral is 0.
/// The reported error adds the outer estimate to the worst inner estimate
/// times the x-extent.
QuadResult integrate_2d(const Integrand2d& f, double x_lo, double x_hi, const Integrand& y_lo,
                        const Integrand& y_hi, const QuadSpec& spec = {},
                        std::span<const double> x_breakpoints = {});

}  // namespace holefield::quadrature
