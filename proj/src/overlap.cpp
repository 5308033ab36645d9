#include "holefield/overlap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "holefield/errors.hpp"
#include "holefield/kernel.hpp"
#include "holefield/model.hpp"

namespace holefield::overlap {

namespace {

constexpr double kCoincidentFraction = 1e-9;

double arc_half_height(double x, double center_x, double D) {
    const double dx = x - center_x;
    return std::sqrt(std::max(0.0, D * D - dx * dx));
}

}  // namespace

void validate(const HolePair& p) {
    if (!(p.D >= 0.0) || !(p.v1 >= p.D) || !(p.v2 >= p.v1) || !(std::abs(p.phi) <= kPi) ||
        !std::isfinite(p.v2)) {
        std::ostringstream msg;
        msg << "invalid hole pair (v1=" << p.v1 << ", v2=" << p.v2 << ", phi=" << p.phi
            << ", D=" << p.D << "): need D <= v1 <= v2 and |phi| <= pi";
        throw GeometryError(msg.str());
    }
}

Point first_center(const HolePair& p) { return {p.v1, 0.0}; }

Point second_center(const HolePair& p) { return {p.v2 * std::cos(p.phi), p.v2 * std::sin(p.phi)}; }

double center_separation(const HolePair& p) {
    const double w2 = p.v1 * p.v1 + p.v2 * p.v2 - 2.0 * p.v1 * p.v2 * std::cos(p.phi);
    return std::sqrt(std::max(0.0, w2));
}

double phi_hat(double v1, double v2, double D) {
    if (std::abs(v1 - v2) >= 2.0 * D) return 0.0;
    const double arg = (v1 * v1 + v2 * v2 - 4.0 * D * D) / (2.0 * v1 * v2);
    if (arg <= -1.0) return kPi;
    return std::acos(std::min(1.0, arg));
}

IntersectionPoints intersection_points(const HolePair& p) {
    const double w = center_separation(p);
    if (w >= 2.0 * p.D) throw GeometryError("holes do not overlap (w >= 2D)");
    if (w <= kCoincidentFraction * p.D) {
        throw GeometryError("hole centers coincide; the lens is the full hole");
    }
    const Point c1 = first_center(p);
    const Point c2 = second_center(p);
    const double h = std::sqrt(std::max(0.0, 4.0 * p.D * p.D / (w * w) - 1.0));
    IntersectionPoints out;
    out.w = w;
    out.first = {0.5 * (c1.x + c2.x) + 0.5 * h * c2.y, 0.5 * c2.y + 0.5 * h * (c1.x - c2.x)};
    out.second = {0.5 * (c1.x + c2.x) - 0.5 * h * c2.y, 0.5 * c2.y - 0.5 * h * (c1.x - c2.x)};
    return out;
}

quadrature::QuadResult lens_integral(const HolePair& p,
                                     const std::function<double(double, double)>& f,
                                     const quadrature::QuadSpec& spec) {
    if (p.D <= 0.0) return {};
    const double w = center_separation(p);
    if (w >= 2.0 * p.D) return {};

    const Point c1 = first_center(p);
    const Point c2 = second_center(p);
    const double x_lo = std::max(c1.x, c2.x) - p.D;
    const double x_hi = std::min(c1.x, c2.x) + p.D;
    if (!(x_hi > x_lo)) return {};

    auto y_lo = [&](double x) {
        return std::max(c1.y - arc_half_height(x, c1.x, p.D), c2.y - arc_half_height(x, c2.x, p.D));
    };
    auto y_hi = [&](double x) {
        return std::min(c1.y + arc_half_height(x, c1.x, p.D), c2.y + arc_half_height(x, c2.x, p.D));
    };

    std::array<double, 2> splits{x_lo, x_lo};
    if (w > kCoincidentFraction * p.D) {
        const IntersectionPoints ip = intersection_points(p);
        splits = {ip.first.x, ip.second.x};
    }
    return quadrature::integrate_2d(f, x_lo, x_hi, y_lo, y_hi, spec, splits);
}

quadrature::QuadResult overlap_kernel_integral(const HolePair& p, double s, double P, double alpha,
                                               const quadrature::QuadSpec& spec) {
    validate(p);
    if (std::abs(p.phi) >= phi_hat(p.v1, p.v2, p.D)) return {};
    const double sP = s * P;
    if (sP <= 0.0) return {};
    return lens_integral(
        p, [sP, alpha](double x, double y) { return interference_kernel_sq(x * x + y * y, sP, alpha); },
        spec);
}

quadrature::QuadResult overlap_kernel_integral_piecewise(const HolePair& p, double s, double P,
                                                         double alpha,
                                                         const quadrature::QuadSpec& spec) {
    validate(p);
    if (std::abs(p.phi) >= phi_hat(p.v1, p.v2, p.D)) return {};
    const double sP = s * P;
    if (sP <= 0.0) return {};
    if (center_separation(p) <= kCoincidentFraction * p.D) {
        return overlap_kernel_integral(p, s, P, alpha, spec);
    }

    const IntersectionPoints ip = intersection_points(p);
    const Point c1 = first_center(p);
    const Point c2 = second_center(p);
    auto kernel = [sP, alpha](double x, double y) {
        return interference_kernel_sq(x * x + y * y, sP, alpha);
    };
    const double D = p.D;
    if (p.phi >= 0.0) {
        return quadrature::integrate_2d(
            kernel, ip.second.x, ip.first.x,
            [&](double x) { return c2.y - arc_half_height(x, c2.x, D); },
            [&](double x) { return arc_half_height(x, c1.x, D); }, spec);
    }
    return quadrature::integrate_2d(
        kernel, ip.first.x, ip.second.x, [&](double x) { return -arc_half_height(x, c1.x, D); },
        [&](double x) { return c2.y + arc_half_height(x, c2.x, D); }, spec);
}

double lens_area(double z, double D) {
    if (D <= 0.0 || z >= 2.0 * D) return 0.0;
    const double q = std::max(0.0, z) / (2.0 * D);
    return 2.0 * D * D * std::acos(q) - z * D * std::sqrt(std::max(0.0, 1.0 - q * q));
}

double mean_pair_overlap(double D) { return kPi * D * D / 4.0; }

double mean_overlap_area(double lambda1, double D) {
    const double expected_neighbours = lambda1 * 4.0 * kPi * D * D;
    return std::min(expected_neighbours * mean_pair_overlap(D), kPi * D * D);
}

}  // namespace holefield::overlap
