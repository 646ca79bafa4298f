#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kernel.hpp"
#include "step_function.hpp"

namespace scale_smooth {

struct SmoothedProfile {
    double scale = 0.0;
    std::vector<double> positions;
    std::vector<double> values;
};

/// Smoothed income u(t,x) = integral f(y) p_t(x,y) dy for piecewise-constant
/// data, integrating the kernel segment by segment so jumps in f are handled
/// exactly. scale = 0 short-circuits to f(x) (point-mass initial condition).
/// Absolute error is bounded by abs_tol * max|f|.
inline double smooth_at(const StepFunction& f, const KernelParams& params, double x,
                        double abs_tol = 1e-10) {
    if (!(params.scale >= 0.0)) throw std::domain_error("smooth_at: scale must be >= 0");
    if (!(x <= 0.0)) throw std::domain_error("smooth_at: x must be <= 0");
    if (params.scale == 0.0) return f(x);

    const double lo = kernel_support_lower(params, x);
    std::vector<double> edges{lo};
    for (double b : f.breakpoints()) {
        if (b > lo && b < 0.0) edges.push_back(b);
    }
    edges.push_back(0.0);

    const double segment_tol = abs_tol / static_cast<double>(edges.size() - 1);
    double result = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double value = f(0.5 * (edges[i] + edges[i + 1]));
        if (value != 0.0) {
            result += value * kernel_mass(params, x, edges[i], edges[i + 1], segment_tol);
        }
    }
    return result;
}

/// Elementwise smooth_at over sorted positions xs <= 0.
inline SmoothedProfile smooth_profile(const StepFunction& f, const KernelParams& params,
                                      const std::vector<double>& xs, double abs_tol = 1e-10) {
    if (xs.empty()) throw std::invalid_argument("smooth_profile: no positions");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] <= 0.0)) throw std::invalid_argument("smooth_profile: positions must be <= 0");
        if (i > 0 && xs[i] < xs[i - 1]) {
            throw std::invalid_argument("smooth_profile: positions must be sorted");
        }
    }
    SmoothedProfile profile{params.scale, xs, {}};
    profile.values.reserve(xs.size());
    for (double x : xs) profile.values.push_back(smooth_at(f, params, x, abs_tol));
    return profile;
}

/// Smoothing of an arbitrary integrable f by direct quadrature against the
/// kernel; used as an oracle for smooth data where the segment route does not
/// apply.
template <class F>
double smooth_function_at(F&& f, const KernelParams& params, double x, double abs_tol = 1e-10) {
    if (!(params.scale >= 0.0)) throw std::domain_error("smooth_function_at: scale must be >= 0");
    if (!(x <= 0.0)) throw std::domain_error("smooth_function_at: x must be <= 0");
    if (params.scale == 0.0) return f(x);
    const double lo = kernel_support_lower(params, x);
    const double bump = x + params.drift * params.scale;
    const double st = std::sqrt(params.scale);
    std::vector<double> splits;
    detail::append_feature_edges(splits, bump, st);
    detail::append_feature_edges(splits, -bump, st);
    return integrate_split([&](double y) { return f(y) * kernel_density(params, x, y); }, lo,
                           0.0, splits, {abs_tol, 60});
}

/// Numerical composition of two kernels with the same drift,
///
///   (p_s . p_t)(x,y) = integral p_s(x,z) p_t(z,y) dz over (-inf, 0],
///
/// which the recursivity axiom requires to equal p_{s+t}(x,y). Kept fully
/// independent of the closed form at scale s+t so it can serve as a check.
inline double chapman_lhs(const KernelParams& first, const KernelParams& second, double x,
                          double y, double abs_tol = 1e-8) {
    if (first.drift != second.drift) {
        throw std::invalid_argument("chapman_lhs: kernels must share one drift");
    }
    detail::check_kernel_domain(first, x, y);
    detail::check_kernel_domain(second, x, y);

    const double r = first.drift;
    const double s = first.scale;
    const double t = second.scale;
    const auto integrand = [&](double z) {
        return kernel_density(first, x, z) * kernel_density(second, z, y);
    };

    // In z the second factor decays like a Gaussian around z = y - rt; take
    // the wider of that bound and the first factor's support, then widen
    // until the product is negligible.
    double lo = std::min(kernel_support_lower(first, x),
                         y - std::abs(r) * t - 8.0 * std::sqrt(t) - (r < 0.0 ? std::abs(r) * t : 0.0));
    const double stride = 8.0 * std::sqrt(std::max(s, t));
    for (int i = 0; i < 200 && integrand(lo) >= 1e-18; ++i) {
        lo -= std::max({stride, 0.5 * std::abs(lo), 1.0});
    }

    std::vector<double> splits;
    detail::append_feature_edges(splits, x + r * s, std::sqrt(s));
    detail::append_feature_edges(splits, -(x + r * s), std::sqrt(s));
    detail::append_feature_edges(splits, y - r * t, std::sqrt(t));
    detail::append_feature_edges(splits, -(y + r * t), std::sqrt(t));
    return integrate_split(integrand, lo, 0.0, splits, {abs_tol, 60});
}

}  // namespace scale_smooth
