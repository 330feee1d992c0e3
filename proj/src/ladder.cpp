#include "pixelate/ladder.hpp"

#include <algorithm>
#include <string>

#include "pixelate/error.hpp"

namespace pixelate {

namespace {

// Next rung of the ladder, or nullopt if it would exceed kMaxPixelSide.
std::optional<std::int64_t> next_size(std::int64_t current, int step, ScaleMode mode, int factor) {
    const std::int64_t base = std::int64_t{1} + factor;
    const int power = mode == ScaleMode::imult ? 1 : step;
    std::int64_t s = current;
    for (int p = 0; p < power; ++p) {
        if (s > kMaxPixelSide / base) return std::nullopt;
        s *= base;
    }
    return s;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

std::string_view to_string(ScaleMode mode) {
    return mode == ScaleMode::imult ? "imult" : "iexpn";
}

std::optional<ScaleMode> parse_scale_mode(std::string_view text) {
    if (text == "imult") return ScaleMode::imult;
    if (text == "iexpn") return ScaleMode::iexpn;
    return std::nullopt;
}

SizeLadder build_ladder(int num_sizes, ScaleMode mode, int factor) {
    if (num_sizes < 1 || factor < 1) {
        throw Error(ErrorCode::InconsistentInputs, "num_sizes and factor must both be >= 1");
    }
    SizeLadder ladder{num_sizes, mode, factor, {1}};
    ladder.sizes.reserve(static_cast<std::size_t>(num_sizes));
    for (int k = 1; k < num_sizes; ++k) {
        const auto s = next_size(ladder.sizes.back(), k, mode, factor);
        if (!s) {
            throw Error(ErrorCode::LadderOverflow,
                        "size class " + std::to_string(k + 1) + " exceeds the 2^31-cell bound (" +
                            std::string(to_string(mode)) + ", factor " + std::to_string(factor) +
                            ")");
        }
        ladder.sizes.push_back(*s);
    }
    return ladder;
}

int largest_feasible_num_sizes(ScaleMode mode, int factor, std::int64_t max_side) {
    if (max_side < 1) return 0;
    int k = 1;
    std::int64_t s = 1;
    while (true) {
        const auto next = next_size(s, k, mode, factor);
        if (!next || *next > max_side) return k;
        s = *next;
        ++k;
    }
}

BigPixelPartition partition_grid(const LatticeSpec& spec, const SizeLadder& ladder, MinBig min_big) {
    if (min_big.x < 1 || min_big.y < 1) {
        throw Error(ErrorCode::InconsistentInputs, "min_big must be >= 1 on both axes");
    }
    const std::int64_t side = ladder.largest();
    BigPixelPartition part;
    part.n_x = spec.n_x;
    part.n_y = spec.n_y;
    part.big_side = side;
    part.n_big_x = ceil_div(spec.n_x, side);
    part.n_big_y = ceil_div(spec.n_y, side);

    if (part.n_big_x < min_big.x || part.n_big_y < min_big.y) {
        const std::int64_t feasible = std::min(spec.n_x / min_big.x, spec.n_y / min_big.y);
        const int feasible_k = largest_feasible_num_sizes(ladder.mode, ladder.factor, feasible);
        throw Error(ErrorCode::GridTooSmall,
                    "a " + std::to_string(spec.n_x) + "x" + std::to_string(spec.n_y) +
                        " grid with big-pixel side " + std::to_string(side) + " gives " +
                        std::to_string(part.n_big_x) + "x" + std::to_string(part.n_big_y) +
                        " big pixels, fewer than the required " + std::to_string(min_big.x) +
                        "x" + std::to_string(min_big.y) + "; largest feasible s_K = " +
                        std::to_string(feasible) + ", largest feasible num_sizes = " +
                        std::to_string(feasible_k) + " (" + std::string(to_string(ladder.mode)) +
                        ", factor " + std::to_string(ladder.factor) + ")");
    }

    part.pixels.resize(static_cast<std::size_t>(part.n_big_x * part.n_big_y));
    for (std::int64_t bj = 0; bj < part.n_big_y; ++bj) {
        for (std::int64_t bi = 0; bi < part.n_big_x; ++bi) {
            auto& bp = part.pixels[part.index(bi, bj)];
            bp.range = {bi * side, std::min((bi + 1) * side, spec.n_x), bj * side,
                        std::min((bj + 1) * side, spec.n_y)};
        }
    }
    return part;
}

BigPixelPartition big_pixel_stats(const PredictionGrid& grid, BigPixelPartition partition) {
    const auto& spec = grid.spec();
    if (partition.n_x != spec.n_x || partition.n_y != spec.n_y) {
        throw Error(ErrorCode::InconsistentInputs, "partition geometry does not match the grid");
    }
    const auto cells = grid.cells();
    const auto n = static_cast<std::int64_t>(partition.pixels.size());

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t p = 0; p < n; ++p) {
        auto& bp = partition.pixels[static_cast<std::size_t>(p)];
        double sum = 0.0;
        std::int64_t count = 0;
        for (std::int64_t j = bp.range.j0; j < bp.range.j1; ++j) {
            for (std::int64_t i = bp.range.i0; i < bp.range.i1; ++i) {
                const Cell& c = cells[spec.index(i, j)];
                if (c.is_observed()) {
                    sum += c.uncertainty;
                    ++count;
                }
            }
        }
        bp.included_count = count;
        bp.avg_uncertainty = count > 0 ? std::optional<double>(sum / static_cast<double>(count))
                                       : std::nullopt;
    }
    return partition;
}

}  // namespace pixelate
