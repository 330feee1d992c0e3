#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pixelate/grid.hpp"
#include "pixelate/ladder.hpp"
#include "pixelate/quantile.hpp"

namespace pixelate {

/// A block of cells inside one big pixel whose Observed cells share one
/// displayed value.
struct NestedPixel {
    /// (big-pixel index << 32) | block index within the big pixel.
    std::uint64_t id = 0;
    std::int64_t big_index = 0;
    int size_class = 1;
    CellRange bounds;
    double prediction_mean = 0.0;
    double uncertainty_mean = 0.0;
    std::int64_t included_count = 0;
};

inline constexpr std::int64_t kNoPixel = -1;

/// Output of pixelation. `cells` is a verbatim copy of the input grid. For
/// Observed cells, `display` holds the nested pixel's prediction mean and
/// `pixel` indexes into `pixels`; masked cells display their own value and
/// have size class 0 and pixel kNoPixel.
struct PixelatedGrid {
    LatticeSpec spec;
    std::vector<Cell> cells;
    std::vector<double> display;
    std::vector<int> size_class;
    std::vector<std::int64_t> pixel;
    std::vector<NestedPixel> pixels;  // sorted by id
};

/// Bit-level comparison of every field, NaN payloads included.
bool bit_identical(const PixelatedGrid& a, const PixelatedGrid& b);

std::uint64_t encode_pixel_id(std::int64_t big_index, std::int64_t block_index);

/// Block-parallel pixelation. Each allocated big pixel is split into
/// s_k x s_k blocks anchored at its lower-left corner; a block's display
/// value is the mean over its Observed cells, summed in row-major order.
PixelatedGrid pixelate(const PredictionGrid& grid, const BigPixelPartition& partition,
                       const AllocationMap& alloc, const SizeLadder& ladder);

/// Serial reference: every cell recomputes its block from scratch and
/// rescans the whole grid. Quadratic; for testing only.
PixelatedGrid pixelate_naive(const PredictionGrid& grid, const BigPixelPartition& partition,
                             const AllocationMap& alloc, const SizeLadder& ladder);

struct SummaryRow {
    int size_class = 1;
    std::int64_t side_cells = 1;
    double side_w = 0.0;  // projection units
    double side_h = 0.0;
    std::int64_t big_pixel_count = 0;
    double u_lower = -std::numeric_limits<double>::infinity();  // exclusive
    double u_upper = std::numeric_limits<double>::infinity();   // inclusive
    std::int64_t cells_per_full_pixel = 1;
};

using SummaryTable = std::vector<SummaryRow>;

SummaryTable summarize(const PixelatedGrid& pixelated, const AllocationMap& alloc,
                       const SizeLadder& ladder, const LatticeSpec& spec);

}  // namespace pixelate
