#include "holefield/chebyshev.hpp"

#include <algorithm>
#include <cmath>

#include "holefield/errors.hpp"
#include "holefield/model.hpp"

namespace holefield::quadrature {

namespace {

std::vector<double> coefficients(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    std::vector<double> a(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += samples[j] * std::cos(kPi * static_cast<double>(k) * (static_cast<double>(j) + 0.5) /
                                         static_cast<double>(n));
        }
        a[k] = 2.0 * sum / static_cast<double>(n);
    }
    a[0] *= 0.5;
    return a;
}

}  // namespace

HalfLineChebyshev::HalfLineChebyshev(const std::function<double(double)>& f, double origin,
                                     double scale, double tolerance, int max_nodes)
    : origin_(origin), scale_(scale) {
    if (!(scale > 0.0)) throw ConfigError("Chebyshev map scale must be > 0");
    auto node_u = [&](int j, int n) {
        const double x = std::cos(kPi * (j + 0.5) / n);
        return origin_ + scale_ * (1.0 + x) / (1.0 - x);
    };

    int n = 27;
    std::vector<double> samples(n);
    for (int j = 0; j < n; ++j) samples[j] = f(node_u(j, n));
    while (true) {
        coeffs_ = coefficients(samples);
        error_ = std::abs(coeffs_[n - 1]) + std::abs(coeffs_[n - 2]) + std::abs(coeffs_[n - 3]);
        if (error_ <= tolerance || 3 * n > max_nodes) break;
        // Node j of the n-point set is node 3j+1 of the 3n-point set.
        std::vector<double> finer(3 * n);
        for (int j = 0; j < 3 * n; ++j) {
            finer[j] = (j % 3 == 1) ? samples[j / 3] : f(node_u(j, 3 * n));
        }
        samples = std::move(finer);
        n *= 3;
    }
}

double HalfLineChebyshev::operator()(double u) const {
    const double t = u - origin_;
    const double x = std::clamp((t - scale_) / (t + scale_), -1.0, 1.0);
    // Clenshaw recurrence.
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
        const double b0 = 2.0 * x * b1 - b2 + coeffs_[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + coeffs_[0];
}

}  // namespace holefield::quadrature
