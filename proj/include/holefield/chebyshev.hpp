#pragma once

#include <functional>
#include <vector>

namespace holefield::quadrature {

/// Chebyshev interpolant of a smooth function on the half-line [origin, inf),
/// through the map u = origin + scale (1 + x) / (1 - x), x in [-1, 1).
/// Node counts triple (27, 81, 243) so earlier samples are reused; growth
/// stops once the trailing coefficients fall below `tolerance`.
class HalfLineChebyshev {
public:
    HalfLineChebyshev(const std::function<double(double)>& f, double origin, double scale,
                      double tolerance, int max_nodes = 243);

    double operator()(double u) const;

    /// Sum of the magnitudes of the three trailing coefficients.
    double error_estimate() const { return error_; }
    int nodes() const { return static_cast<int>(coeffs_.size()); }

private:
    double origin_;
    double scale_;
    std::vector<double> coeffs_;
    double error_ = 0.0;
};

}  // namespace holefield::quadrature
