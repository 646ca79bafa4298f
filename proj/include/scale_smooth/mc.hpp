#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kernel.hpp"

namespace scale_smooth {

struct PathConfig {
    double start = 0.0;    // x0 <= 0
    double drift = 0.0;    // r
    double horizon = 1.0;  // >= 0
    double dt = 1e-3;      // > 0
    std::int64_t n_paths = 1;
    std::uint64_t seed = 0;
    // The discretely observed running maximum undershoots the continuous one
    // by about 0.5826 sqrt(dt) on average (boundary-crossing correction).
    // Off by default: the baseline stays the plain discrete reflection map,
    // and the bias is absorbed into comparison tolerances instead.
    bool max_correction = false;
};

/// Sorted endpoint samples of the reflected process; all <= 0.
struct EmpiricalDistribution {
    std::vector<double> samples;
};

namespace detail {

inline std::uint64_t avalanche64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    return avalanche64(state);
}

/// Per-path normal stream seeded from (seed, path index): paths can be
/// generated in any order and still reproduce bit-identically. Both inputs
/// pass through a full 64-bit mix first; deriving the state by arithmetic on
/// the raw path index would leave neighbouring streams offset by exactly the
/// generator's own increment and therefore replaying each other's draws.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path) {
        state_ = avalanche64(seed + 0x9e3779b97f4a7c15ULL) ^
                 avalanche64((path + 1) * 0xbf58476d1ce4e5b9ULL);
    }

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Box-Muller; u1 kept away from 0 so the log is finite.
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() { return (splitmix64(state_) >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline void validate(const PathConfig& cfg) {
    if (!(cfg.start <= 0.0) || !std::isfinite(cfg.start)) {
        throw std::invalid_argument("paths: start must be <= 0");
    }
    if (!std::isfinite(cfg.drift)) throw std::invalid_argument("paths: drift must be finite");
    if (!(cfg.horizon >= 0.0)) throw std::invalid_argument("paths: horizon must be >= 0");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("paths: dt must be > 0");
    if (cfg.n_paths < 1) throw std::invalid_argument("paths: need at least one path");
}

inline long step_count(const PathConfig& cfg) {
    if (cfg.horizon == 0.0) return 0;
    return static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
}

}  // namespace detail

/// Simulates X_t = x0 + r t + B_t on a dt-grid and applies the reflection map
/// Z_t = X_t - L_t with L_t = sup_{s<=t} X_s^+ (the running positive part of
/// the maximum), returning the sorted endpoints Z_horizon.
inline EmpiricalDistribution simulate_endpoints(const PathConfig& cfg) {
    detail::validate(cfg);
    const long n_steps = detail::step_count(cfg);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double last_dt =
        n_steps == 0 ? 0.0 : cfg.horizon - static_cast<double>(n_steps - 1) * cfg.dt;
    const double correction = cfg.max_correction && n_steps > 0 ? 0.5826 * sqrt_dt : 0.0;

    EmpiricalDistribution dist;
    dist.samples.resize(static_cast<std::size_t>(cfg.n_paths));
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        detail::NormalStream stream(cfg.seed, static_cast<std::uint64_t>(p));
        double position = cfg.start;
        double running_max = cfg.start;
        for (long k = 0; k < n_steps; ++k) {
            const double step_dt = (k + 1 == n_steps) ? last_dt : cfg.dt;
            const double step_sd = (k + 1 == n_steps) ? std::sqrt(last_dt) : sqrt_dt;
            position += cfg.drift * step_dt + step_sd * stream.next();
            running_max = std::max(running_max, position);
        }
        const double boundary = std::max(running_max + correction, 0.0);
        dist.samples[static_cast<std::size_t>(p)] = position - boundary;
    }
    std::sort(dist.samples.begin(), dist.samples.end());
    return dist;
}

/// Full (X, L, Z) record of a single path; reproduces exactly what
/// simulate_endpoints computes for that path index.
struct PathTrace {
    std::vector<double> times;
    std::vector<double> position;   // X
    std::vector<double> boundary;   // L
    std::vector<double> reflected;  // Z = X - L
};

inline PathTrace trace_path(const PathConfig& cfg, std::int64_t path_index) {
    detail::validate(cfg);
    if (path_index < 0 || path_index >= cfg.n_paths) {
        throw std::invalid_argument("trace_path: path index out of range");
    }
    const long n_steps = detail::step_count(cfg);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double last_dt =
        n_steps == 0 ? 0.0 : cfg.horizon - static_cast<double>(n_steps - 1) * cfg.dt;
    const double correction = cfg.max_correction && n_steps > 0 ? 0.5826 * sqrt_dt : 0.0;

    detail::NormalStream stream(cfg.seed, static_cast<std::uint64_t>(path_index));
    PathTrace trace;
    double position = cfg.start;
    double running_max = cfg.start;
    double time = 0.0;
    const auto record = [&] {
        trace.times.push_back(time);
        trace.position.push_back(position);
        const double boundary = std::max(running_max + (time > 0.0 ? correction : 0.0), 0.0);
        trace.boundary.push_back(boundary);
        trace.reflected.push_back(position - boundary);
    };
    record();
    for (long k = 0; k < n_steps; ++k) {
        const double step_dt = (k + 1 == n_steps) ? last_dt : cfg.dt;
        const double step_sd = (k + 1 == n_steps) ? std::sqrt(last_dt) : sqrt_dt;
        position += cfg.drift * step_dt + step_sd * stream.next();
        running_max = std::max(running_max, position);
        time = (k + 1 == n_steps) ? cfg.horizon : static_cast<double>(k + 1) * cfg.dt;
        record();
    }
    return trace;
}

/// Fraction of samples <= y (right-continuous empirical CDF).
inline double empirical_cdf(const EmpiricalDistribution& dist, double y) {
    if (dist.samples.empty()) throw std::invalid_argument("empirical_cdf: empty distribution");
    const auto it = std::upper_bound(dist.samples.begin(), dist.samples.end(), y);
    return static_cast<double>(it - dist.samples.begin()) /
           static_cast<double>(dist.samples.size());
}

/// Sup over a uniform y-grid of |empirical CDF - kernel CDF| where the kernel
/// CDF is accumulated by quadrature from the lower support bound. The caller
/// is responsible for matching params.scale with the horizon that produced
/// the samples.
inline double ks_statistic(const EmpiricalDistribution& dist, const KernelParams& params,
                           double start, int grid_points = 512) {
    if (grid_points < 2) throw std::invalid_argument("ks_statistic: need at least 2 grid points");
    const double lo = kernel_support_lower(params, start);
    double cdf = 0.0;
    double previous = lo;
    double worst = 0.0;
    for (int j = 1; j <= grid_points; ++j) {
        const double y = lo * (1.0 - static_cast<double>(j) / grid_points);
        cdf = std::min(cdf + kernel_mass(params, start, previous, y, 1e-10), 1.0);
        worst = std::max(worst, std::abs(empirical_cdf(dist, y) - cdf));
        previous = y;
    }
    return worst;
}

}  // namespace scale_smooth
