#pragma once

#include <functional>

#include "holefield/quadrature.hpp"

namespace holefield::overlap {

/// Two holes of radius D with centers at distances v1 <= v2 from the origin,
/// separated by angle phi. The first center sits on the positive x-axis.
struct HolePair {
    double v1 = 0.0;
    double v2 = 0.0;
    double phi = 0.0;
    double D = 0.0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct IntersectionPoints {
    Point first;   // (u1_hat, t1_hat)
    Point second;  // (u2_hat, t2_hat)
    double w = 0.0;
};

/// Throws GeometryError unless 0 <= D <= v1 <= v2 and |phi| <= pi.
void validate(const HolePair& pair);

Point first_center(const HolePair& pair);
Point second_center(const HolePair& pair);

/// Law-of-cosines distance between the two centers.
double center_separation(const HolePair& pair);

/// Largest |phi| for which disks at distances v1 and v2 overlap: 0 when
/// |v1 - v2| >= 2D, pi when they overlap for every angle.
double phi_hat(double v1, double v2, double D);

/// The two points where the hole boundaries cross. Requires 0 < w < 2D;
/// w >= 2D or w <= 1e-9 D throws GeometryError.
IntersectionPoints intersection_points(const HolePair& pair);

/// Integral of f(x, y) over the lens b(y1, D) ∩ b(y2, D), computed by nested
/// quadrature over the common x-extent of the two disks with y between the
/// higher of the lower arcs and the lower of the upper arcs. Outer panels are
/// split at the intersection abscissae. Zero when the disks are disjoint.
quadrature::QuadResult lens_integral(const HolePair& pair,
                                     const std::function<double(double, double)>& f,
                                     const quadrature::QuadSpec& spec = {});

/// B(v1, v2, phi): the interference kernel integrated over the lens.
quadrature::QuadResult overlap_kernel_integral(const HolePair& pair, double s, double P, double alpha,
                                               const quadrature::QuadSpec& spec = {});

/// The branch form with x running between the intersection abscissae and
/// fixed arcs (upper arc of the first hole, lower arc of the second for
/// phi > 0; mirrored for phi < 0). It agrees with overlap_kernel_integral only
/// when the lens does not bulge past its chord endpoints in x, e.g. v1 = v2.
quadrature::QuadResult overlap_kernel_integral_piecewise(const HolePair& pair, double s, double P,
                                                         double alpha,
                                                         const quadrature::QuadSpec& spec = {});

/// Area of the intersection of two radius-D disks whose centers are z apart.
double lens_area(double z, double D);

/// Mean lens area against a uniformly placed neighbour within 2D: pi D^2 / 4.
double mean_pair_overlap(double D);

/// Average total pairwise overlap area of one hole, min(lambda1 pi^2 D^4, pi D^2).
/// The expected number of neighbours within 2D is lambda1 * 4 pi D^2.
double mean_overlap_area(double lambda1, double D);

}  // namespace holefield::overlap
