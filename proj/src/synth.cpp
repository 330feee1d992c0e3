#include "pixelate/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pixelate/error.hpp"

namespace pixelate {

namespace {

void validate(const SyntheticConfig& c) {
    if (c.n_x < 1 || c.n_y < 1) throw Error(ErrorCode::InconsistentInputs, "grid dimensions must be positive");
    if (!(c.cell_w > 0.0) || !(c.cell_h > 0.0)) throw Error(ErrorCode::InconsistentInputs, "cell spacing must be positive");
    if (!(c.range > 0.0)) throw Error(ErrorCode::InconsistentInputs, "range must be positive");
    if (!(c.base_u > 0.0)) throw Error(ErrorCode::InconsistentInputs, "base_u must be positive");
    if (c.num_bumps < 0 || c.num_sites < 0) throw Error(ErrorCode::InconsistentInputs, "bump and site counts must be >= 0");
    if (c.n_x * c.n_y > kMaxCells) throw Error(ErrorCode::InconsistentInputs, "grid exceeds 2^31 cells");
}

double squared(double v) { return v * v; }

}  // namespace

SyntheticSurface::SyntheticSurface(const SyntheticConfig& config)
    : range_(config.range), base_u_(config.base_u) {
    validate(config);
    SplitMix64 root(config.seed);
    SplitMix64 bump_rng = root.split();
    SplitMix64 site_rng = root.split();

    const double extent_x = static_cast<double>(config.n_x - 1) * config.cell_w;
    const double extent_y = static_cast<double>(config.n_y - 1) * config.cell_h;

    for (int g = 0; g < config.num_bumps; ++g) {
        Bump b{};
        b.amplitude = bump_rng.uniform();
        b.center_x = config.origin_x + bump_rng.uniform() * extent_x;
        b.center_y = config.origin_y + bump_rng.uniform() * extent_y;
        b.width = 0.5 * config.range + bump_rng.uniform() * 1.5 * config.range;
        bumps_.push_back(b);
    }
    // Sites sit on cell centers so the uncertainty is exactly zero there.
    for (int s = 0; s < config.num_sites; ++s) {
        const auto i = std::min(static_cast<std::int64_t>(site_rng.uniform() * static_cast<double>(config.n_x)), config.n_x - 1);
        const auto j = std::min(static_cast<std::int64_t>(site_rng.uniform() * static_cast<double>(config.n_y)), config.n_y - 1);
        sites_.push_back({config.origin_x + static_cast<double>(i) * config.cell_w,
                          config.origin_y + static_cast<double>(j) * config.cell_h});
    }
}

double SyntheticSurface::mean(double x, double y) const {
    double m = 0.0;
    for (const auto& b : bumps_) {
        m += b.amplitude *
             std::exp(-(squared(x - b.center_x) + squared(y - b.center_y)) / (2.0 * squared(b.width)));
    }
    return m;
}

double SyntheticSurface::uncertainty(double x, double y) const {
    double nearest = 0.0;
    for (const auto& s : sites_) {
        nearest = std::max(nearest, std::exp(-(squared(x - s.x) + squared(y - s.y)) / (2.0 * squared(range_))));
    }
    return base_u_ * (1.0 - nearest);
}

PredictionGrid generate_field(const SyntheticConfig& config) {
    const SyntheticSurface surface(config);
    const LatticeSpec spec{config.origin_x, config.origin_y, config.cell_w, config.cell_h,
                           config.n_x, config.n_y};
    std::vector<Cell> cells(spec.cell_count());

#pragma omp parallel for
    for (std::int64_t j = 0; j < spec.n_y; ++j) {
        for (std::int64_t i = 0; i < spec.n_x; ++i) {
            auto& cell = cells[spec.index(i, j)];
            if (config.missing_rect && config.missing_rect->contains(i, j)) {
                cell = Cell::missing();
                continue;
            }
            const double m = surface.mean(spec.center_x(i), spec.center_y(j));
            const double u = surface.uncertainty(spec.center_x(i), spec.center_y(j));
            cell = (m <= config.zero_threshold && u <= config.zero_threshold)
                       ? Cell::certain_zero(0.0, 0.0)
                       : Cell::observed(m, u);
        }
    }
    return PredictionGrid(spec, std::move(cells));
}

SyntheticConfig bundled_config(std::string_view name) {
    SyntheticConfig c;
    if (name == "demo_small") {
        c.seed = 1;
        c.n_x = c.n_y = 64;
        c.num_sites = 3;
        c.num_bumps = 4;
        c.range = 8.0;
        c.base_u = 1.0;
        c.missing_rect = CellRange{4, 14, 48, 58};
        c.zero_threshold = 0.05;
        return c;
    }
    if (name == "demo_acceptance") {
        c.seed = 7;
        c.n_x = c.n_y = 512;
        c.cell_w = c.cell_h = 5.0;  // km
        c.num_sites = 12;
        c.num_bumps = 8;
        c.range = 200.0;
        c.base_u = 1.0;
        c.missing_rect = CellRange{0, 48, 448, 512};
        c.zero_threshold = 0.02;
        return c;
    }
    throw Error(ErrorCode::UnknownDataset, "no bundled dataset named '" + std::string(name) + "'");
}

PredictionGrid bundled_dataset(std::string_view name) { return generate_field(bundled_config(name)); }

}  // namespace pixelate
