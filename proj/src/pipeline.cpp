#include "pixelate/pipeline.hpp"

namespace pixelate {

PipelineResult run_pipeline(const PredictionGrid& grid, const PixelationParams& params,
                            Kernel kernel) {
    PipelineResult r;
    r.ladder = build_ladder(params.num_sizes, params.mode, params.factor);
    r.partition = big_pixel_stats(grid, partition_grid(grid.spec(), r.ladder, params.min_big));

    const auto values = allocatable_uncertainties(r.partition);
    const auto boundaries = values.empty()
                                ? std::vector<double>(static_cast<std::size_t>(params.num_sizes - 1), 0.0)
                                : empirical_quantiles(values, params.num_sizes);
    r.alloc = allocate_intervals(r.partition, boundaries, params.num_sizes);

    r.pixelated = kernel == Kernel::Parallel ? pixelate(grid, r.partition, r.alloc, r.ladder)
                                             : pixelate_naive(grid, r.partition, r.alloc, r.ladder);
    r.summary = summarize(r.pixelated, r.alloc, r.ladder, grid.spec());
    return r;
}

}  // namespace pixelate
