#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "pde.hpp"

namespace scale_smooth {

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> values;
    bool monotone_nonincreasing = true;
    double max_uptick = 0.0;
    // e^{2rx} dx is not integrable on the half-line for r <= 0; in that case
    // the values are diagnostics on the truncated grid only.
    bool truncated_measure = false;
};

/// Weighted Dirichlet energy I(u) = integral u_x^2 e^{2rx} dx over the grid:
/// trapezoidal in space, central differences inside, second-order one-sided
/// stencils at the ends (matching the solver's accuracy).
inline double energy(const FieldOnGrid& u, double drift) {
    validate(u.grid);
    const std::size_t n = u.values.size();
    if (n != static_cast<std::size_t>(u.grid.n)) {
        throw std::invalid_argument("energy: field does not match its grid");
    }
    const double h = u.grid.spacing();
    const std::vector<double>& v = u.values;

    const auto weighted_square = [&](double ux, int i) {
        return ux * ux * std::exp(2.0 * drift * u.grid.node(i));
    };

    double total = 0.5 * weighted_square((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h), 0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        total += weighted_square((v[i + 1] - v[i - 1]) / (2.0 * h), static_cast<int>(i));
    }
    total += 0.5 * weighted_square((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h),
                                   static_cast<int>(n - 1));
    return total * h;
}

/// Energies along a solver trajectory, with a monotone-nonincreasing verdict
/// allowing rel_slack * (1 + I_k) of discretization slack per step.
inline EnergyReport decay_report(const Trajectory& trajectory, double drift,
                                 double rel_slack = 1e-10) {
    if (trajectory.states.empty() || trajectory.times.size() != trajectory.states.size()) {
        throw std::invalid_argument("decay_report: empty or inconsistent trajectory");
    }
    validate(trajectory.grid);
    for (const auto& state : trajectory.states) {
        if (state.size() != static_cast<std::size_t>(trajectory.grid.n)) {
            throw std::invalid_argument("decay_report: state size does not match the grid");
        }
    }

    EnergyReport report;
    report.truncated_measure = drift <= 0.0;
    report.times = trajectory.times;
    report.values.reserve(trajectory.states.size());
    for (const auto& state : trajectory.states) {
        report.values.push_back(energy(FieldOnGrid{trajectory.grid, state}, drift));
    }
    for (std::size_t k = 0; k + 1 < report.values.size(); ++k) {
        const double uptick = report.values[k + 1] - report.values[k];
        if (uptick > report.max_uptick) report.max_uptick = uptick;
        if (report.values[k + 1] > report.values[k] + rel_slack * (1.0 + report.values[k])) {
            report.monotone_nonincreasing = false;
        }
    }
    return report;
}

}  // namespace scale_smooth
