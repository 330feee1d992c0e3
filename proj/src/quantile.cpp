#include "pixelate/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pixelate/error.hpp"

namespace pixelate {

std::vector<double> empirical_quantiles(std::span<const double> values, int num_intervals) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyValues, "cannot take quantiles of an empty sample");
    }
    if (num_intervals < 1) {
        throw Error(ErrorCode::InconsistentInputs, "number of intervals must be >= 1");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto m = static_cast<std::int64_t>(sorted.size());

    std::vector<double> q;
    q.reserve(static_cast<std::size_t>(num_intervals - 1));
    for (int k = 1; k < num_intervals; ++k) {
        // 0-based position (M-1)k/K; the integer product keeps it exact
        // whenever the division is.
        const double pos = static_cast<double>((m - 1) * k) / static_cast<double>(num_intervals);
        const auto lo = static_cast<std::int64_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(lo);
        const double v_lo = sorted[static_cast<std::size_t>(lo)];
        if (lo + 1 >= m || frac == 0.0) {
            q.push_back(v_lo);
        } else {
            q.push_back(v_lo + frac * (sorted[static_cast<std::size_t>(lo + 1)] - v_lo));
        }
    }
    return q;
}

std::size_t AllocationMap::allocated_count() const {
    return static_cast<std::size_t>(
        std::count_if(intervals.begin(), intervals.end(), [](int k) { return k > 0; }));
}

std::vector<double> allocatable_uncertainties(const BigPixelPartition& partition) {
    std::vector<double> out;
    out.reserve(partition.pixels.size());
    for (const auto& bp : partition.pixels) {
        if (bp.included_count > 0) out.push_back(*bp.avg_uncertainty);
    }
    return out;
}

AllocationMap allocate_intervals(const BigPixelPartition& partition,
                                 std::span<const double> boundaries, int num_intervals) {
    if (num_intervals < 1 || boundaries.size() != static_cast<std::size_t>(num_intervals - 1)) {
        throw Error(ErrorCode::BoundaryMismatch,
                    "expected " + std::to_string(std::max(num_intervals - 1, 0)) +
                        " boundaries, got " + std::to_string(boundaries.size()));
    }
    AllocationMap alloc;
    alloc.num_intervals = num_intervals;
    alloc.boundaries.assign(boundaries.begin(), boundaries.end());
    alloc.intervals.assign(partition.pixels.size(), 0);

    const auto values = allocatable_uncertainties(partition);
    if (!values.empty()) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        alloc.degenerate = *lo == *hi;
    }
    if (alloc.degenerate) {
        alloc.warnings.emplace_back(kConstantUncertaintyWarning);
    }

    const auto n = static_cast<std::int64_t>(partition.pixels.size());
#pragma omp parallel for
    for (std::int64_t p = 0; p < n; ++p) {
        const auto& bp = partition.pixels[static_cast<std::size_t>(p)];
        if (bp.included_count == 0) continue;
        if (alloc.degenerate) {
            alloc.intervals[static_cast<std::size_t>(p)] = 1;
            continue;
        }
        // First boundary with u <= q_k; past the end means interval K.
        const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), *bp.avg_uncertainty);
        alloc.intervals[static_cast<std::size_t>(p)] =
            static_cast<int>(it - boundaries.begin()) + 1;
    }
    return alloc;
}

}  // namespace pixelate
