#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace scale_smooth {

/// Uniform mesh of n nodes on [-length, 0]; the last node is exactly 0.
struct Grid {
    double length = 1.0;
    int n = 3;

    double spacing() const { return length / (n - 1); }

    double node(int i) const {
        return -length * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
    }

    std::vector<double> nodes() const {
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = node(i);
        return xs;
    }

    bool operator==(const Grid&) const = default;
};

inline void validate(const Grid& g) {
    if (!(g.length > 0.0) || !std::isfinite(g.length)) {
        throw std::invalid_argument("grid: length must be positive and finite");
    }
    if (g.n < 3) throw std::invalid_argument("grid: need at least 3 nodes");
}

struct FieldOnGrid {
    Grid grid;
    std::vector<double> values;
};

template <class F>
FieldOnGrid sample_on_grid(const Grid& g, F&& f) {
    validate(g);
    FieldOnGrid field{g, {}};
    field.values.reserve(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) field.values.push_back(f(g.node(i)));
    return field;
}

}  // namespace scale_smooth
