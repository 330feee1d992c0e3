#pragma once

// Test-only helpers: random inputs and independent oracles. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pixelate/grid.hpp"
#include "pixelate/ladder.hpp"

namespace pixelate::testing {

/// Quantile at probability p by scanning every segment of the piecewise
/// linear empirical quantile function through (i/(M-1), v_(i)).
inline double brute_force_quantile(std::vector<double> values, double p) {
    // insertion sort, independent of std::sort
    for (std::size_t i = 1; i < values.size(); ++i) {
        for (std::size_t j = i; j > 0 && values[j - 1] > values[j]; --j) std::swap(values[j - 1], values[j]);
    }
    const std::size_t m = values.size();
    if (m == 1) return values[0];
    const double step = 1.0 / static_cast<double>(m - 1);
    for (std::size_t seg = 0; seg + 1 < m; ++seg) {
        const double left = static_cast<double>(seg) * step;
        const double right = static_cast<double>(seg + 1) * step;
        if (p >= left && p <= right) {
            const double w = (p - left) / (right - left);
            return (1.0 - w) * values[seg] + w * values[seg + 1];
        }
    }
    return values.back();
}

inline bool close_rel(double a, double b, double tol) {
    if (a == b) return true;
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= tol * scale;
}

struct RandomGridOptions {
    std::int64_t n_x = 16;
    std::int64_t n_y = 16;
    double mask_fraction = 0.0;  // half Missing, half CertainZero
};

inline PredictionGrid random_grid(std::mt19937_64& rng, const RandomGridOptions& o) {
    std::uniform_real_distribution<double> value(-2.0, 10.0);
    std::uniform_real_distribution<double> unc(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    LatticeSpec spec{0.0, 0.0, 1.0, 1.0, o.n_x, o.n_y};
    std::vector<Cell> cells;
    cells.reserve(spec.cell_count());
    for (std::size_t c = 0; c < spec.cell_count(); ++c) {
        const double r = coin(rng);
        if (r < o.mask_fraction / 2) {
            cells.push_back(Cell::missing());
        } else if (r < o.mask_fraction) {
            cells.push_back(Cell::certain_zero(0.0, 0.0));
        } else {
            cells.push_back(Cell::observed(value(rng), unc(rng)));
        }
    }
    return PredictionGrid(spec, std::move(cells));
}

/// Uncertainty of every Observed cell mapped through u -> a*u + b.
inline PredictionGrid rescale_uncertainty(const PredictionGrid& grid, double a, double b) {
    std::vector<Cell> cells(grid.cells().begin(), grid.cells().end());
    for (auto& c : cells) {
        if (c.is_observed()) c.uncertainty = a * c.uncertainty + b;
    }
    return PredictionGrid(grid.spec(), std::move(cells));
}

/// The 4x4 worked example: value x + 4y, uncertainty 0.1 for x < 2 and 0.9
/// otherwise.
inline PredictionGrid worked_example_grid(double cell = 1.0) {
    LatticeSpec spec{0.0, 0.0, cell, cell, 4, 4};
    std::vector<Cell> cells;
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            cells.push_back(Cell::observed(x + 4.0 * y, x < 2 ? 0.1 : 0.9));
        }
    }
    return PredictionGrid(spec, std::move(cells));
}

}  // namespace pixelate::testing
