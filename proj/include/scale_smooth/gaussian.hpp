#pragma once

#include <cmath>

namespace scale_smooth {

inline constexpr double sqrt_two = 1.41421356237309504880168872420969808;
inline constexpr double inv_sqrt_two_pi = 0.39894228040143267793994605993438187;
inline constexpr double log_sqrt_two_pi = 0.91893853320467274178032973640561764;

/// Standard normal density phi(z) = exp(-z^2/2)/sqrt(2 pi).
inline double gaussian_pdf(double z) {
    return inv_sqrt_two_pi * std::exp(-0.5 * z * z);
}

/// Standard normal CDF Phi(z) = erfc(-z/sqrt 2)/2.
inline double gaussian_cdf(double z) {
    return 0.5 * std::erfc(-z / sqrt_two);
}

/// log Phi(z). erfc keeps full relative precision in the lower tail until it
/// underflows near z = -37.5; below the switch point we use the tail series
///
///   Phi(z) = phi(z)/(-z) * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - ...),
///
/// whose truncation error at |z| >= 36 is below 1 ulp of the result.
inline double log_gaussian_cdf(double z) {
    if (z > -36.0) {
        return std::log(0.5 * std::erfc(-z / sqrt_two));
    }
    const double w = 1.0 / (z * z);
    const double series = 1.0 + w * (-1.0 + w * (3.0 + w * (-15.0 + w * 105.0)));
    return -0.5 * z * z - std::log(-z) - log_sqrt_two_pi + std::log(series);
}

}  // namespace scale_smooth
