#pragma once

#include "pixelate/engine.hpp"

namespace pixelate {

struct PixelationParams {
    int num_sizes = 6;
    ScaleMode mode = ScaleMode::imult;
    int factor = 1;
    MinBig min_big{12, 12};
};

enum class Kernel { Parallel, Naive };

struct PipelineResult {
    SizeLadder ladder;
    BigPixelPartition partition;
    AllocationMap alloc;
    PixelatedGrid pixelated;
    SummaryTable summary;
};

/// ladder -> partition -> big-pixel stats -> quantiles -> allocation ->
/// pixelation -> summary. A grid with no Observed cells skips the
/// quantile step and passes through untouched.
PipelineResult run_pipeline(const PredictionGrid& grid, const PixelationParams& params,
                            Kernel kernel = Kernel::Parallel);

}  // namespace pixelate
