#pragma once

#include <cmath>

namespace holefield {

/// 1 / (1 + r^alpha / (sP)): the probability-generating-functional weight of
/// an interferer at distance r under unit-mean Rayleigh fading. Written as
/// sP / (sP + r^alpha) so that sP = 0 gives 0 rather than 0/0.
inline double interference_kernel(double r, double sP, double alpha) {
    if (sP <= 0.0) return 0.0;
    return sP / (sP + std::pow(r, alpha));
}

/// Same kernel taking the squared distance, for Cartesian integrands.
inline double interference_kernel_sq(double r2, double sP, double alpha) {
    if (sP <= 0.0) return 0.0;
    return sP / (sP + std::pow(r2, 0.5 * alpha));
}

/// Distance at which the kernel equals 1/2, (sP)^(1/alpha); the integrands
/// bend sharply around it when it is small compared to the hole radius.
inline double kernel_knee(double sP, double alpha) { return std::pow(sP, 1.0 / alpha); }

}  // namespace holefield
