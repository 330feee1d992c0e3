#include "pixelate/engine.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "pixelate/error.hpp"

namespace pixelate {

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

[[noreturn]] void inconsistent(const std::string& what) {
    throw Error(ErrorCode::InconsistentInputs, what);
}

void check_inputs(const PredictionGrid& grid, const BigPixelPartition& partition,
                  const AllocationMap& alloc, const SizeLadder& ladder) {
    const auto& spec = grid.spec();
    if (partition.n_x != spec.n_x || partition.n_y != spec.n_y) {
        inconsistent("partition was built for a different lattice");
    }
    if (partition.big_side != ladder.largest()) {
        inconsistent("partition big-pixel side differs from the ladder's largest size");
    }
    if (partition.n_big_x != ceil_div(spec.n_x, partition.big_side) ||
        partition.n_big_y != ceil_div(spec.n_y, partition.big_side) ||
        partition.pixels.size() != static_cast<std::size_t>(partition.n_big_x * partition.n_big_y)) {
        inconsistent("partition tiling does not cover the lattice");
    }
    if (alloc.num_intervals != ladder.num_sizes ||
        ladder.sizes.size() != static_cast<std::size_t>(ladder.num_sizes)) {
        inconsistent("allocation interval count differs from the ladder size count");
    }
    if (alloc.intervals.size() != partition.pixels.size()) {
        inconsistent("allocation does not cover every big pixel");
    }
    for (int k : alloc.intervals) {
        if (k < 0 || k > ladder.num_sizes) inconsistent("interval index out of range");
    }
}

struct Accumulator {
    double value_sum = 0.0;
    double uncertainty_sum = 0.0;
    std::int64_t count = 0;

    void add(const Cell& c) {
        value_sum += c.value;
        uncertainty_sum += c.uncertainty;
        ++count;
    }
};

PixelatedGrid passthrough(const PredictionGrid& grid) {
    PixelatedGrid out;
    out.spec = grid.spec();
    out.cells.assign(grid.cells().begin(), grid.cells().end());
    out.display.resize(out.cells.size());
    std::transform(out.cells.begin(), out.cells.end(), out.display.begin(),
                   [](const Cell& c) { return c.value; });
    out.size_class.assign(out.cells.size(), 0);
    out.pixel.assign(out.cells.size(), kNoPixel);
    return out;
}

}  // namespace

std::uint64_t encode_pixel_id(std::int64_t big_index, std::int64_t block_index) {
    return (static_cast<std::uint64_t>(big_index) << 32) | static_cast<std::uint64_t>(block_index);
}

bool bit_identical(const PixelatedGrid& a, const PixelatedGrid& b) {
    if (!(a.spec == b.spec) || a.cells != b.cells || a.size_class != b.size_class ||
        a.pixel != b.pixel || a.display.size() != b.display.size() ||
        a.pixels.size() != b.pixels.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.display.size(); ++i) {
        if (!same_bits(a.display[i], b.display[i])) return false;
    }
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const auto& p = a.pixels[i];
        const auto& q = b.pixels[i];
        if (p.id != q.id || p.big_index != q.big_index || p.size_class != q.size_class ||
            !(p.bounds == q.bounds) || p.included_count != q.included_count ||
            !same_bits(p.prediction_mean, q.prediction_mean) ||
            !same_bits(p.uncertainty_mean, q.uncertainty_mean)) {
            return false;
        }
    }
    return true;
}

PixelatedGrid pixelate(const PredictionGrid& grid, const BigPixelPartition& partition,
                       const AllocationMap& alloc, const SizeLadder& ladder) {
    check_inputs(grid, partition, alloc, ladder);
    const auto& spec = grid.spec();
    const auto cells = grid.cells();
    PixelatedGrid out = passthrough(grid);

    const auto n_big = static_cast<std::int64_t>(partition.pixels.size());
    std::vector<std::vector<NestedPixel>> per_big(static_cast<std::size_t>(n_big));
    bool unallocated_observed = false;

#pragma omp parallel for schedule(dynamic) reduction(|| : unallocated_observed)
    for (std::int64_t p = 0; p < n_big; ++p) {
        const auto& big = partition.pixels[static_cast<std::size_t>(p)];
        const int k = alloc.intervals[static_cast<std::size_t>(p)];
        if (k == 0) {
            for (std::int64_t j = big.range.j0; j < big.range.j1; ++j) {
                for (std::int64_t i = big.range.i0; i < big.range.i1; ++i) {
                    if (cells[spec.index(i, j)].is_observed()) unallocated_observed = true;
                }
            }
            continue;
        }
        const std::int64_t s = ladder.sizes[static_cast<std::size_t>(k - 1)];
        const std::int64_t blocks_x = ceil_div(big.range.width(), s);
        const std::int64_t blocks_y = ceil_div(big.range.height(), s);
        auto& local = per_big[static_cast<std::size_t>(p)];

        for (std::int64_t by = 0; by < blocks_y; ++by) {
            for (std::int64_t bx = 0; bx < blocks_x; ++bx) {
                const CellRange b{big.range.i0 + bx * s, std::min(big.range.i0 + (bx + 1) * s, big.range.i1),
                                  big.range.j0 + by * s, std::min(big.range.j0 + (by + 1) * s, big.range.j1)};
                Accumulator acc;
                for (std::int64_t j = b.j0; j < b.j1; ++j) {
                    for (std::int64_t i = b.i0; i < b.i1; ++i) {
                        const Cell& c = cells[spec.index(i, j)];
                        if (c.is_observed()) acc.add(c);
                    }
                }
                if (acc.count == 0) continue;
                const auto count = static_cast<double>(acc.count);
                local.push_back({encode_pixel_id(p, by * blocks_x + bx), p, k, b,
                                 acc.value_sum / count, acc.uncertainty_sum / count, acc.count});
            }
        }
    }
    if (unallocated_observed) {
        inconsistent("a big pixel with observed cells has no interval");
    }

    std::vector<std::int64_t> offset(static_cast<std::size_t>(n_big) + 1, 0);
    for (std::int64_t p = 0; p < n_big; ++p) {
        offset[static_cast<std::size_t>(p) + 1] =
            offset[static_cast<std::size_t>(p)] +
            static_cast<std::int64_t>(per_big[static_cast<std::size_t>(p)].size());
    }
    out.pixels.resize(static_cast<std::size_t>(offset.back()));

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t p = 0; p < n_big; ++p) {
        const auto& local = per_big[static_cast<std::size_t>(p)];
        for (std::size_t n = 0; n < local.size(); ++n) {
            const auto& px = local[n];
            const std::int64_t index = offset[static_cast<std::size_t>(p)] + static_cast<std::int64_t>(n);
            out.pixels[static_cast<std::size_t>(index)] = px;
            for (std::int64_t j = px.bounds.j0; j < px.bounds.j1; ++j) {
                for (std::int64_t i = px.bounds.i0; i < px.bounds.i1; ++i) {
                    const auto c = spec.index(i, j);
                    if (!out.cells[c].is_observed()) continue;
                    out.display[c] = px.prediction_mean;
                    out.size_class[c] = px.size_class;
                    out.pixel[c] = index;
                }
            }
        }
    }
    return out;
}

PixelatedGrid pixelate_naive(const PredictionGrid& grid, const BigPixelPartition& partition,
                             const AllocationMap& alloc, const SizeLadder& ladder) {
    check_inputs(grid, partition, alloc, ladder);
    const auto& spec = grid.spec();
    PixelatedGrid out = passthrough(grid);
    const std::int64_t side = partition.big_side;

    std::map<std::uint64_t, NestedPixel> found;
    std::vector<std::uint64_t> cell_id(out.cells.size(), 0);

    for (std::int64_t j = 0; j < spec.n_y; ++j) {
        for (std::int64_t i = 0; i < spec.n_x; ++i) {
            if (!grid.at(i, j).is_observed()) continue;

            const std::int64_t big_i = i / side;
            const std::int64_t big_j = j / side;
            const std::int64_t big = big_j * partition.n_big_x + big_i;
            const int k = alloc.intervals[static_cast<std::size_t>(big)];
            if (k == 0) inconsistent("a big pixel with observed cells has no interval");
            const std::int64_t s = ladder.sizes[static_cast<std::size_t>(k - 1)];

            const std::int64_t big_x0 = big_i * side;
            const std::int64_t big_y0 = big_j * side;
            const std::int64_t big_x1 = std::min(big_x0 + side, spec.n_x);
            const std::int64_t big_y1 = std::min(big_y0 + side, spec.n_y);
            const std::int64_t local_x = (i - big_x0) / s;
            const std::int64_t local_y = (j - big_y0) / s;
            CellRange block;
            block.i0 = big_x0 + local_x * s;
            block.j0 = big_y0 + local_y * s;
            block.i1 = std::min(block.i0 + s, big_x1);
            block.j1 = std::min(block.j0 + s, big_y1);
            const std::int64_t per_row = (big_x1 - big_x0 + s - 1) / s;

            double value_sum = 0.0, uncertainty_sum = 0.0;
            std::int64_t count = 0;
            for (std::int64_t y = 0; y < spec.n_y; ++y) {
                for (std::int64_t x = 0; x < spec.n_x; ++x) {
                    const Cell& c = grid.at(x, y);
                    if (c.is_observed() && block.contains(x, y)) {
                        value_sum += c.value;
                        uncertainty_sum += c.uncertainty;
                        ++count;
                    }
                }
            }

            const auto id = encode_pixel_id(big, local_y * per_row + local_x);
            const auto idx = spec.index(i, j);
            out.display[idx] = value_sum / static_cast<double>(count);
            out.size_class[idx] = k;
            cell_id[idx] = id;
            found.try_emplace(id, NestedPixel{id, big, k, block, value_sum / static_cast<double>(count),
                                              uncertainty_sum / static_cast<double>(count), count});
        }
    }

    std::map<std::uint64_t, std::int64_t> position;
    for (const auto& [id, px] : found) {
        position[id] = static_cast<std::int64_t>(out.pixels.size());
        out.pixels.push_back(px);
    }
    for (std::size_t c = 0; c < out.cells.size(); ++c) {
        if (out.cells[c].is_observed()) out.pixel[c] = position.at(cell_id[c]);
    }
    return out;
}

SummaryTable summarize(const PixelatedGrid& pixelated, const AllocationMap& alloc,
                       const SizeLadder& ladder, const LatticeSpec& spec) {
    if (alloc.num_intervals != ladder.num_sizes ||
        alloc.boundaries.size() != static_cast<std::size_t>(ladder.num_sizes - 1)) {
        inconsistent("allocation and ladder disagree on the number of size classes");
    }
    if (!(pixelated.spec == spec)) inconsistent("pixelated grid has a different lattice");

    SummaryTable table;
    for (int k = 1; k <= ladder.num_sizes; ++k) {
        SummaryRow row;
        row.size_class = k;
        row.side_cells = ladder.sizes[static_cast<std::size_t>(k - 1)];
        row.side_w = static_cast<double>(row.side_cells) * spec.cell_w;
        row.side_h = static_cast<double>(row.side_cells) * spec.cell_h;
        row.big_pixel_count = std::count(alloc.intervals.begin(), alloc.intervals.end(), k);
        if (k > 1) row.u_lower = alloc.boundaries[static_cast<std::size_t>(k - 2)];
        if (k < ladder.num_sizes) row.u_upper = alloc.boundaries[static_cast<std::size_t>(k - 1)];
        row.cells_per_full_pixel = row.side_cells * row.side_cells;
        table.push_back(row);
    }
    return table;
}

}  // namespace pixelate
