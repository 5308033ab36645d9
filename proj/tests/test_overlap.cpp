#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holefield/bounds.hpp"
#include "holefield/errors.hpp"
#include "holefield/model.hpp"
#include "holefield/overlap.hpp"
#include "holefield/rng.hpp"

using namespace holefield;
using namespace holefield::overlap;

namespace {

double circle_residual(const Point& p, const Point& c, double D) {
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    return std::abs(dx * dx + dy * dy - D * D);
}

double B(double v1, double v2, double phi, double D, double sP = 1e-3, double alpha = 4.0) {
    return overlap_kernel_integral({v1, v2, phi, D}, sP, 1.0, alpha).value;
}

}  // namespace

TEST_CASE("center separation") {
    CHECK(center_separation({2, 2, 0, 1}) == doctest::Approx(0.0));
    CHECK(center_separation({3, 4, kPi / 2, 1}) == doctest::Approx(5.0));
    CHECK(center_separation({1, 2, kPi, 1}) == doctest::Approx(3.0));
}

TEST_CASE("phi_hat") {
    CHECK(phi_hat(1, 1, 1) == doctest::Approx(kPi));
    CHECK(phi_hat(1, 10, 1) == 0.0);
    CHECK(phi_hat(2, 2, 1) == doctest::Approx(kPi / 3));
    // At phi_hat the centers are exactly 2D apart.
    for (auto [v1, v2, D] : {std::array{2.0, 2.0, 1.0}, std::array{1.5, 2.7, 0.8}, std::array{5.0, 6.0, 1.5}}) {
        const double ph = phi_hat(v1, v2, D);
        CHECK(center_separation({v1, v2, ph, D}) == doctest::Approx(2.0 * D).epsilon(1e-12));
    }
}

TEST_CASE("intersection points") {
    const HolePair pair{2, 2, kPi / 3, 2};
    const IntersectionPoints ip = intersection_points(pair);
    for (const Point& p : {ip.first, ip.second}) {
        CHECK(circle_residual(p, first_center(pair), pair.D) < 1e-9);
        CHECK(circle_residual(p, second_center(pair), pair.D) < 1e-9);
    }
    CHECK(ip.w == doctest::Approx(2.0));

    // Mirror symmetry.
    const IntersectionPoints mirrored = intersection_points({2, 2, -kPi / 3, 2});
    CHECK(mirrored.first.x == doctest::Approx(ip.second.x));
    CHECK(mirrored.first.y == doctest::Approx(-ip.second.y));
    CHECK(mirrored.second.x == doctest::Approx(ip.first.x));
    CHECK(mirrored.second.y == doctest::Approx(-ip.first.y));

    // Near tangency the points meet.
    const double ph = phi_hat(3, 3.5, 1);
    const IntersectionPoints near = intersection_points({3, 3.5, ph * (1 - 1e-10), 1});
    CHECK(std::hypot(near.first.x - near.second.x, near.first.y - near.second.y) < 1e-3);

    CHECK_THROWS_AS(intersection_points({1, 10, 0, 1}), GeometryError);
    CHECK_THROWS_AS(intersection_points({2, 2, 0, 1}), GeometryError);
}

TEST_CASE("pair validation") {
    CHECK_THROWS_AS(validate(HolePair{0.5, 2, 0, 1}), GeometryError);
    CHECK_THROWS_AS(validate(HolePair{2, 1.5, 0, 1}), GeometryError);
    CHECK_THROWS_AS(validate(HolePair{2, 3, 4.0, 1}), GeometryError);
    CHECK_NOTHROW(validate(HolePair{1, 1, kPi, 1}));
}

TEST_CASE("lens area") {
    CHECK(lens_area(0, 1.5) == doctest::Approx(kPi * 2.25));
    CHECK(lens_area(2, 1) == 0.0);
    CHECK(lens_area(5, 1) == 0.0);
    CHECK(lens_area(1, 1) == doctest::Approx(2 * std::acos(0.5) - std::sqrt(0.75)));
    CHECK(lens_area(1, 1) == doctest::Approx(1.2284).epsilon(1e-4));
    double prev = lens_area(0, 1);
    for (int i = 1; i <= 40; ++i) {
        const double a = lens_area(0.05 * i, 1);
        CHECK(a <= prev);
        prev = a;
    }

    // Monte Carlo area oracle: unit disks at (0,0) and (1,0), 10^6 points in the bounding box of the first.
    CounterRng rng(2024, 0);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double x = 2 * rng.uniform() - 1;
        const double y = 2 * rng.uniform() - 1;
        if (x * x + y * y < 1 && (x - 1) * (x - 1) + y * y < 1) ++hits;
    }
    const double p = static_cast<double>(hits) / n;
    const double se = 4 * std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(4 * p - lens_area(1, 1)) < 4 * se);
}

TEST_CASE("lens integral with unit weight is the lens area") {
    for (auto pair : {HolePair{2, 2, 0.4, 1}, HolePair{1.5, 2.2, -0.3, 0.9}, HolePair{3, 3.1, 0.05, 1.5}}) {
        const double area = lens_integral(pair, [](double, double) { return 1.0; }).value;
        CHECK(area == doctest::Approx(lens_area(center_separation(pair), pair.D)).epsilon(1e-9));
    }
    CHECK(lens_integral({1, 10, 0, 1}, [](double, double) { return 1.0; }).value == 0.0);
}

TEST_CASE("mean pairwise overlap") {
    for (double D : {0.3, 1.0, 1.5}) {
        // Neighbour uniform over the disk of radius 2D: density of its distance is 2z/(4D^2).
        const auto r = quadrature::integrate([D](double z) { return lens_area(z, D) * 2 * z / (4 * D * D); }, 0,
                                             2 * D, quadrature::QuadSpec{1e-12, 1e-14, 200});
        CHECK(std::abs(r.value - kPi * D * D / 4) < 1e-8);
        CHECK(mean_pair_overlap(D) == doctest::Approx(kPi * D * D / 4));
    }
    CHECK(mean_overlap_area(0, 1.5) == 0.0);
    CHECK(mean_overlap_area(1e6, 0.6) == doctest::Approx(kPi * 0.36));
    CHECK(mean_overlap_area(0.2, 1.5) == doctest::Approx(7.069).epsilon(1e-3));
    CHECK(0.2 * kPi * kPi * std::pow(1.5, 4) == doctest::Approx(9.993).epsilon(1e-3));
    CHECK(mean_overlap_area(0.01, 0.6) == doctest::Approx(0.01 * kPi * kPi * std::pow(0.6, 4)));
}

TEST_CASE("overlap kernel integral") {
    SUBCASE("zero beyond phi_hat") {
        const double ph = phi_hat(2, 2.5, 1);
        CHECK(B(2, 2.5, ph, 1) == 0.0);
        CHECK(B(2, 2.5, -ph - 0.1, 1) == 0.0);
        CHECK(B(2, 2.5, kPi, 1) == 0.0);
        CHECK(B(1, 10, 0, 1) == 0.0);
    }
    SUBCASE("mirror symmetric in phi") {
        for (double phi : {0.05, 0.2, 0.5}) {
            CHECK(B(1.5, 2.0, phi, 1) == doctest::Approx(B(1.5, 2.0, -phi, 1)).epsilon(1e-9));
        }
    }
    SUBCASE("continuous at phi_hat and non-increasing in |phi|") {
        const double v1 = 1.2;
        const double v2 = 1.9;
        const double D = 0.8;
        const double ph = phi_hat(v1, v2, D);
        double prev = B(v1, v2, 0, D);
        for (int i = 1; i <= 20; ++i) {
            const double b = B(v1, v2, ph * i / 20.0, D);
            CHECK(b <= prev + 1e-12);
            prev = b;
        }
        CHECK(B(v1, v2, ph * (1 - 1e-6), D) < 1e-6);
    }
    SUBCASE("bounded by each hole's kernel integral") {
        for (auto [v1, v2, phi] : {std::array{1.0, 1.5, 0.3}, std::array{2.0, 2.0, 0.1}, std::array{1.5, 2.5, 0.0}}) {
            const double b = B(v1, v2, phi, 1);
            const double f1 = bounds::hole_kernel_integral(v1, 1, 1e-3, 1, 4, 1).value;
            const double f2 = bounds::hole_kernel_integral(v2, 1, 1e-3, 1, 4, 1).value;
            CHECK(b >= 0.0);
            CHECK(b <= std::min(f1, f2) * (1 + 1e-9));
        }
    }
    SUBCASE("coincident holes give the full single-hole kernel") {
        for (double v : {1.0, 1.7, 4.0}) {
            const double full = bounds::hole_kernel_integral(v, 1, 1e-3, 1, 4, 1).value;
            CHECK(B(v, v, 0, 1) == doctest::Approx(full).epsilon(1e-8));
            CHECK(B(v, v + 1e-7, 1e-8, 1) == doctest::Approx(full).epsilon(1e-5));
        }
    }
    SUBCASE("branch form agrees when the lens stays inside its chord's x-range") {
        for (double phi : {0.1, -0.25, 0.6}) {
            const HolePair p{2, 2, phi, 1};
            CHECK(overlap_kernel_integral_piecewise(p, 1e-3, 1, 4).value ==
                  doctest::Approx(overlap_kernel_integral(p, 1e-3, 1, 4).value).epsilon(1e-8));
        }
    }
    SUBCASE("s = 0 gives zero") { CHECK(B(1, 1.5, 0.2, 1, 0.0) == 0.0); }
}
