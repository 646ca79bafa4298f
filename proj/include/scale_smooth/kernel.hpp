#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gaussian.hpp"
#include "quadrature.hpp"

namespace scale_smooth {

/// Parameters of the weighting kernel: drift toward the present (r, units of
/// 1/time) and smoothing scale (t, units of time). scale = 0 denotes the
/// point-mass limit and is rejected by the density-level operations; the
/// smoother handles it by returning the data unchanged.
struct KernelParams {
    double drift = 0.0;
    double scale = 1.0;
};

namespace detail {

// Forced panel edges that keep a Gaussian feature of width sigma at c visible
// to a 15-point panel: without them a panel much wider than sigma samples
// right past the feature and reports zero error.
inline void append_feature_edges(std::vector<double>& edges, double center, double sigma) {
    edges.push_back(center - 8.0 * sigma);
    edges.push_back(center - sigma);
    edges.push_back(center);
    edges.push_back(center + sigma);
    edges.push_back(center + 8.0 * sigma);
}

inline void check_kernel_domain(const KernelParams& p, double x, double y) {
    if (!(p.scale > 0.0)) {
        throw std::domain_error("kernel: scale must be > 0 (scale = 0 is a point mass, not a density)");
    }
    if (!std::isfinite(p.drift) || !std::isfinite(p.scale)) {
        throw std::domain_error("kernel: parameters must be finite");
    }
    if (!(x <= 0.0) || !(y <= 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw std::domain_error("kernel: positions must satisfy x <= 0 and y <= 0");
    }
}

}  // namespace detail

/// Transition density p_t(x,y) of Brownian motion with drift r reflected at
/// the origin, restricted to the past half-line x,y <= 0:
///
///   p_t(x,y) = 2r e^{2ry} Phi((rt+x+y)/st)
///            + phi((y-x-rt)/st)/st
///            + e^{2ry} phi((rt+x+y)/st)/st,      st = sqrt(t).
///
/// The e^{2ry} products are evaluated in log domain: for r < 0 and y far in
/// the past the exponential overflows while the paired Phi/phi factor
/// underflows, and only the product is meaningful. For r < 0 the first term
/// is negative and near-total cancellation can leave the sum a few ulps below
/// zero, so the result is clamped at 0.
inline double kernel_density(const KernelParams& p, double x, double y) {
    detail::check_kernel_domain(p, x, y);
    const double r = p.drift;
    const double t = p.scale;
    const double st = std::sqrt(t);
    const double a = (r * t + x + y) / st;
    const double b = (y - x - r * t) / st;
    double density = gaussian_pdf(b) / st;
    density += std::exp(2.0 * r * y - 0.5 * a * a - log_sqrt_two_pi) / st;
    if (r != 0.0) {
        const double log_term = std::log(2.0 * std::abs(r)) + 2.0 * r * y + log_gaussian_cdf(a);
        density += (r > 0.0 ? 1.0 : -1.0) * std::exp(log_term);
    }
    return std::max(density, 0.0);
}

/// Small-scale asymptote of the kernel: the free (non-reflected) Gaussian
/// step, (1/st) phi((y-x-rt)/st). Valid pointwise for x,y < 0 as t -> 0.
inline double kernel_small_t(const KernelParams& p, double x, double y) {
    detail::check_kernel_domain(p, x, y);
    const double st = std::sqrt(p.scale);
    return gaussian_pdf((y - x - p.drift * p.scale) / st) / st;
}

/// Large-scale limit for drift toward the present (r > 0): the exponential
/// profile 2r e^{2ry}, which integrates to 1 on (-inf, 0]. For r <= 0 the
/// kernel flattens to zero on compacts and no stationary profile exists.
inline double stationary_density(double drift, double y) {
    if (!(drift > 0.0)) {
        throw std::domain_error("stationary_density: requires drift > 0 (no stationary profile otherwise)");
    }
    if (!(y <= 0.0)) {
        throw std::domain_error("stationary_density: y must be <= 0");
    }
    return 2.0 * drift * std::exp(2.0 * drift * y);
}

/// Lower end of the numerically relevant support of p_t(x, .). Starts at the
/// 8-sigma Gaussian bound and walks further out until the density itself
/// drops below 1e-16; the walk matters for r > 0, where the exponential tail
/// e^{2ry} is much wider than the Gaussian one.
inline double kernel_support_lower(const KernelParams& p, double x) {
    detail::check_kernel_domain(p, x, 0.0);
    const double rt = std::abs(p.drift) * p.scale;
    const double st = std::sqrt(p.scale);
    double lo = std::min(x - rt, x) - 8.0 * st;
    if (p.drift < 0.0) lo -= rt;
    for (int i = 0; i < 200 && kernel_density(p, x, lo) >= 1e-16; ++i) {
        lo -= std::max({8.0 * st, 0.5 * std::abs(lo), 1.0});
    }
    return lo;
}

/// Mass of the kernel on [y_lo, y_hi] by adaptive quadrature, with forced
/// panel edges at the direct and mirrored bump locations y = x + rt and
/// y = -(x + rt).
inline double kernel_mass(const KernelParams& p, double x, double y_lo, double y_hi,
                          double abs_tol = 1e-9) {
    detail::check_kernel_domain(p, x, std::min(y_lo, 0.0));
    if (!(y_hi <= 0.0)) throw std::domain_error("kernel_mass: interval must lie in (-inf, 0]");
    if (y_lo > y_hi) throw std::domain_error("kernel_mass: inverted interval");
    if (y_lo == y_hi) return 0.0;
    const double bump = x + p.drift * p.scale;
    const double st = std::sqrt(p.scale);
    std::vector<double> splits;
    detail::append_feature_edges(splits, bump, st);
    detail::append_feature_edges(splits, -bump, st);
    return integrate_split([&](double y) { return kernel_density(p, x, y); }, y_lo, y_hi,
                           splits, {abs_tol, 60});
}

}  // namespace scale_smooth
