#pragma once

#include <span>
#include <string>
#include <vector>

#include "pixelate/ladder.hpp"

namespace pixelate {

/// Boundaries q_1..q_{K-1} at probabilities k/K, by linear interpolation
/// between order statistics (h = (M-1)p + 1). K = 1 yields no boundaries.
/// Throws EmptyValues on an empty sample.
std::vector<double> empirical_quantiles(std::span<const double> values, int num_intervals);

inline constexpr const char* kConstantUncertaintyWarning =
    "all big pixels share the same average uncertainty; every big pixel is fully "
    "resolved and spatial variation in uncertainty will be invisible";

struct AllocationMap {
    int num_intervals = 1;
    std::vector<double> boundaries;
    /// Per big pixel (partition order): interval 1..K, or 0 when unallocated.
    std::vector<int> intervals;
    bool degenerate = false;
    std::vector<std::string> warnings;

    std::size_t allocated_count() const;
};

/// Average uncertainties of big pixels with included_count > 0, in
/// partition order.
std::vector<double> allocatable_uncertainties(const BigPixelPartition& partition);

/// interval(u) = min{k : u <= q_k} with q_K = +inf. Throws BoundaryMismatch
/// when boundaries.size() != num_intervals - 1.
AllocationMap allocate_intervals(const BigPixelPartition& partition,
                                 std::span<const double> boundaries, int num_intervals);

}  // namespace pixelate
