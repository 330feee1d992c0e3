#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pixelate/grid.hpp"

namespace pixelate {

/// How nested pixel sides grow from one size class to the next.
///   imult: s[k+1] = s[k] * (1 + c)
///   iexpn: s[k+1] = s[k] * (1 + c)^k
enum class ScaleMode { imult, iexpn };

std::string_view to_string(ScaleMode mode);
std::optional<ScaleMode> parse_scale_mode(std::string_view text);

/// Largest pixel side (in cells) a ladder may reach.
inline constexpr std::int64_t kMaxPixelSide = std::int64_t{1} << 31;

struct SizeLadder {
    int num_sizes = 1;
    ScaleMode mode = ScaleMode::imult;
    int factor = 1;
    std::vector<std::int64_t> sizes{1};

    std::int64_t largest() const { return sizes.back(); }
    bool operator==(const SizeLadder&) const = default;
};

SizeLadder build_ladder(int num_sizes, ScaleMode mode, int factor);

/// Lower bound on the number of big pixels along each axis.
struct MinBig {
    std::int64_t x = 1;
    std::int64_t y = 1;
};

/// Half-open cell range [i0, i1) x [j0, j1).
struct CellRange {
    std::int64_t i0 = 0, i1 = 0, j0 = 0, j1 = 0;

    std::int64_t width() const { return i1 - i0; }
    std::int64_t height() const { return j1 - j0; }
    std::int64_t area() const { return width() * height(); }
    bool contains(std::int64_t i, std::int64_t j) const {
        return i >= i0 && i < i1 && j >= j0 && j < j1;
    }
    bool operator==(const CellRange&) const = default;
};

struct BigPixel {
    CellRange range;
    std::int64_t included_count = 0;
    std::optional<double> avg_uncertainty;  // present iff included_count > 0
};

/// Tiling of the lattice into big pixels of side `big_side`, anchored at
/// cell (0, 0). Big pixels are stored row-major over (I, J).
struct BigPixelPartition {
    std::int64_t n_x = 0, n_y = 0;
    std::int64_t big_side = 1;
    std::int64_t n_big_x = 0, n_big_y = 0;
    std::vector<BigPixel> pixels;

    std::size_t index(std::int64_t big_i, std::int64_t big_j) const {
        return static_cast<std::size_t>(big_j * n_big_x + big_i);
    }
    const BigPixel& at(std::int64_t big_i, std::int64_t big_j) const {
        return pixels[index(big_i, big_j)];
    }
};

/// Largest K for which the ladder's top size fits within `max_side`
/// (0 when even s_1 = 1 does not fit).
int largest_feasible_num_sizes(ScaleMode mode, int factor, std::int64_t max_side);

/// Geometry only; statistics are left empty. Throws GridTooSmall when
/// fewer than `min_big` big pixels fit along either axis.
BigPixelPartition partition_grid(const LatticeSpec& spec, const SizeLadder& ladder, MinBig min_big);

/// Fills included_count and avg_uncertainty from the Observed cells of each
/// big pixel. Parallel over big pixels; results do not depend on scheduling.
BigPixelPartition big_pixel_stats(const PredictionGrid& grid, BigPixelPartition partition);

}  // namespace pixelate
