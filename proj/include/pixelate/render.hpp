#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pixelate/engine.hpp"

namespace pixelate {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Cream to dark red, five stops.
std::vector<Rgb> default_palette();

struct RenderConfig {
    int px_per_cell = 1;
    std::vector<Rgb> palette = default_palette();
    Rgb missing_color{33, 102, 172};
    Rgb zero_color{255, 255, 255};
    std::optional<std::pair<double, double>> value_range;
    bool legend = false;
};

/// Height in pixels of the palette strip appended below the map when
/// RenderConfig::legend is set.
inline constexpr int kLegendHeight = 16;

/// 8-bit RGB raster, top row first.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Rgb at(int x, int y) const {
        const auto k = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
        return {rgb[k], rgb[k + 1], rgb[k + 2]};
    }
    void set(int x, int y, Rgb c) {
        const auto k = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
        rgb[k] = c.r;
        rgb[k + 1] = c.g;
        rgb[k + 2] = c.b;
    }
};

/// (z - lo) / (hi - lo) clamped to [0, 1].
double palette_position(double z, double lo, double hi);

/// Linear interpolation between evenly spaced stops, rounded to nearest.
Rgb palette_color(std::span<const Rgb> palette, double position);

/// One flat color per cell; y is flipped so the top image row is the
/// northernmost lattice row. A degenerate value range paints every Observed
/// cell with the first stop and appends a warning.
Image rasterize_map(const PixelatedGrid& pixelated, const RenderConfig& config,
                    std::vector<std::string>* warnings = nullptr);

/// Cell-resolution image coloring each big pixel by its interval (interval
/// K darkest); unallocated big pixels use missing_color.
Image rasterize_allocation(const BigPixelPartition& partition, const AllocationMap& alloc,
                           const RenderConfig& config);

/// Fixed encoder settings and no ancillary chunks, so equal images give
/// equal bytes.
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> render_map(const PixelatedGrid& pixelated, const RenderConfig& config,
                                     std::vector<std::string>* warnings = nullptr);
std::vector<std::uint8_t> render_allocation(const BigPixelPartition& partition,
                                            const AllocationMap& alloc, const RenderConfig& config);

/// SVG 1.1: one rect per nested pixel, then one per masked cell.
std::string render_svg(const PixelatedGrid& pixelated, const RenderConfig& config,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace pixelate
