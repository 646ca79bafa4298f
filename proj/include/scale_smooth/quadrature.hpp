#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scale_smooth {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    int max_depth = 60;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1,1] (QUADPACK dqk15).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double k15_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double g7_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

// One Kronrod panel; returns the K15 value and |K15 - G7| as error estimate.
template <class F>
std::pair<double, double> gauss_kronrod_15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double kronrod = k15_weights[7] * fc;
    double gauss = g7_weights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_nodes[i];
        const double pair_sum = f(mid - dx) + f(mid + dx);
        kronrod += k15_weights[i] * pair_sum;
        if (i & 1) gauss += g7_weights[(i - 1) / 2] * pair_sum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

template <class F>
double integrate_adaptive(F& f, double a, double b, double abs_tol, int max_depth) {
    struct Panel {
        double a, b, tol;
        int depth;
    };
    std::vector<Panel> work{{a, b, abs_tol, 0}};
    double total = 0.0;
    while (!work.empty()) {
        const Panel p = work.back();
        work.pop_back();
        const auto [value, err] = gauss_kronrod_15(f, p.a, p.b);
        if (err <= p.tol || p.depth >= max_depth) {
            total += value;
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        work.push_back({p.a, mid, 0.5 * p.tol, p.depth + 1});
        work.push_back({mid, p.b, 0.5 * p.tol, p.depth + 1});
    }
    return total;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a,b] to the given absolute
/// tolerance.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: inverted interval");
    if (a == b) return 0.0;
    return detail::integrate_adaptive(f, a, b, opt.abs_tol, opt.max_depth);
}

/// Same, but with forced panel boundaries at the given interior points
/// (points outside (a,b) are ignored). Use where the integrand concentrates
/// curvature at known locations.
template <class F>
double integrate_split(F&& f, double a, double b, std::span<const double> interior,
                       QuadratureOptions opt = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate: inverted interval");
    if (a == b) return 0.0;
    std::vector<double> edges{a};
    for (double p : interior) {
        if (p > a && p < b) edges.push_back(p);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const double panel_tol = opt.abs_tol / static_cast<double>(edges.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        total += detail::integrate_adaptive(f, edges[i], edges[i + 1], panel_tol, opt.max_depth);
    }
    return total;
}

}  // namespace scale_smooth
