#include "holefield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "holefield/errors.hpp"

namespace holefield::quadrature {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208977305695, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    double fv1[10];
    double fv2[10];
    const double fc = f(center);
    double res_gauss = 0.0;
    double res_kronrod = kWgk[10] * fc;
    double res_abs = std::abs(res_kronrod);

    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += kWg[j] * (f1 + f2);
        res_kronrod += kWgk[jtw] * (f1 + f2);
        res_abs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += kWgk[jtwm1] * (f1 + f2);
        res_abs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }

    const double mean = res_kronrod * 0.5;
    double res_asc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }

    const double value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > kTiny / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * res_abs, err);
    }
    if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();
    return {a, b, value, err};
}

double tolerance(const QuadSpec& spec, double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

std::vector<double> initial_nodes(double a, double b, std::span<const double> breakpoints) {
    std::vector<double> nodes{a};
    for (double p : breakpoints) {
        if (std::isfinite(p) && p > a && p < b) nodes.push_back(p);
    }
    std::sort(nodes.begin() + 1, nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes.push_back(b);
    return nodes;
}

}  // namespace

void validate(const QuadSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
        throw ConfigError("quadrature tolerances must be > 0");
    }
    if (spec.max_subdivisions < 1) throw ConfigError("max_subdivisions must be >= 1");
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadSpec& spec) {
    return integrate(f, a, b, {}, spec);
}

QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                     const QuadSpec& spec) {
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate(f, b, a, breakpoints, spec);
        r.value = -r.value;
        return r;
    }

    const std::vector<double> nodes = initial_nodes(a, b, breakpoints);
    std::priority_queue<Panel> heap;
    std::vector<Panel> frozen;
    std::size_t evaluations = 0;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        Panel p = gauss_kronrod_21(f, nodes[i], nodes[i + 1]);
        evaluations += 21;
        value += p.value;
        error += p.error;
        heap.push(p);
    }

    int subdivisions = 0;
    while (error > tolerance(spec, value)) {
        if (heap.empty() || subdivisions >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge: value "
                << value << ", error " << error << " after " << subdivisions << " subdivisions";
            throw NumericalError(msg.str(), value, error);
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        // Roundoff floor: a panel this narrow cannot be refined further.
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 1e3 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            continue;
        }
        Panel left = gauss_kronrod_21(f, worst.a, mid);
        Panel right = gauss_kronrod_21(f, mid, worst.b);
        evaluations += 42;
        ++subdivisions;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed drift from the incremental updates.
    QuadResult result;
    result.evaluations = evaluations;
    while (!heap.empty()) {
        frozen.push_back(heap.top());
        heap.pop();
    }
    std::sort(frozen.begin(), frozen.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    for (const Panel& p : frozen) {
        result.value += p.value;
        result.error_estimate += p.error;
    }
    return result;
}

double TailDecay::tail_bound(double b, double abs_fb) const {
    double bound = 0.0;
    switch (kind) {
        case Kind::PowerLaw:
            bound = abs_fb * b / (rate - 1.0);
            break;
        case Kind::Exponential:
            bound = abs_fb / rate;
            break;
        case Kind::Gaussian:
            bound = abs_fb / (2.0 * rate * b);
            break;
    }
    if (power_exponent > 1.0) bound = std::min(bound, abs_fb * b / (power_exponent - 1.0));
    return safety * bound;
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, const TailDecay& decay,
                                   const QuadSpec& spec, double initial_width,
                                   std::span<const double> breakpoints) {
    if (decay.kind == TailDecay::Kind::PowerLaw && !(decay.rate > 1.0)) {
        throw ConfigError("power-law tail decay needs an exponent > 1");
    }
    if (decay.kind != TailDecay::Kind::PowerLaw && !(decay.rate > 0.0)) {
        throw ConfigError("exponential/gaussian tail decay needs a rate > 0");
    }
    if (decay.kind == TailDecay::Kind::PowerLaw && a <= 0.0 && initial_width <= 0.0) {
        throw ConfigError("power-law tail needs a positive truncation point");
    }
    if (!(initial_width > 0.0)) initial_width = 1.0;

    QuadResult total;
    double lo = a;
    double width = initial_width;
    for (int doubling = 0; doubling <= 60; ++doubling) {
        const double hi = a + width;
        // Each piece gets the full tolerance budget relative to the running total.
        QuadSpec piece_spec = spec;
        piece_spec.abs_tol = std::max(spec.abs_tol, 0.25 * spec.rel_tol * std::abs(total.value));
        QuadResult piece = integrate(f, lo, hi, breakpoints, piece_spec);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.evaluations += piece.evaluations;

        const double fb = std::abs(f(hi));
        total.evaluations += 1;
        if (hi > 0.0 && std::isfinite(fb)) {
            const double tail = decay.tail_bound(hi, fb);
            if (tail <= 0.5 * tolerance(spec, total.value)) {
                total.error_estimate += tail;
                return total;
            }
        }
        lo = hi;
        width *= 2.0;
    }
    std::ostringstream msg;
    msg << "semi-infinite integral from " << a << " did not meet its tail bound within 60 doublings";
    throw NumericalError(msg.str(), total.value, total.error_estimate);
}

QuadResult integrate_2d(const Integrand2d& f, double x_lo, double x_hi, const Integrand& y_lo,
                        const Integrand& y_hi, const QuadSpec& spec,
                        std::span<const double> x_breakpoints) {
    double worst_inner = 0.0;
    std::size_t inner_evals = 0;
    // Inner integrals only need to be accurate relative to the whole.
    QuadSpec inner_spec = spec;
    inner_spec.abs_tol = spec.abs_tol / std::max(1.0, std::abs(x_hi - x_lo));

    auto inner = [&](double x) {
        const double lo = y_lo(x);
        const double hi = y_hi(x);
        if (!(hi > lo)) return 0.0;
        QuadResult r = integrate([&](double y) { return f(x, y); }, lo, hi, inner_spec);
        worst_inner = std::max(worst_inner, r.error_estimate);
        inner_evals += r.evaluations;
        return r.value;
    };
    QuadResult outer = integrate(inner, x_lo, x_hi, x_breakpoints, spec);
    outer.error_estimate += worst_inner * std::abs(x_hi - x_lo);
    outer.evaluations += inner_evals;
    return outer;
}

}  // namespace holefield::quadrature
