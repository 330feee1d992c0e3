#include "pixelate/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <limits>

#include "pixelate/error.hpp"

namespace pixelate {

namespace {

void validate(const RenderConfig& config) {
    if (config.px_per_cell < 1) throw Error(ErrorCode::InconsistentInputs, "px_per_cell must be >= 1");
    if (config.palette.size() < 2) throw Error(ErrorCode::InconsistentInputs, "palette needs at least two stops");
    for (std::size_t k = 1; k < config.palette.size(); ++k) {
        if (config.palette[k] == config.palette[k - 1]) {
            throw Error(ErrorCode::InconsistentInputs, "adjacent palette stops must differ");
        }
    }
}

int image_extent(std::int64_t cells, int px_per_cell) {
    const std::int64_t px = cells * px_per_cell;
    if (px > 1 << 20) throw Error(ErrorCode::InconsistentInputs, "image would exceed 2^20 pixels per side");
    return static_cast<int>(px);
}

struct ValueRange {
    double lo = 0.0, hi = 1.0;
    bool degenerate = false;
};

ValueRange display_range(const PixelatedGrid& px, const RenderConfig& config,
                         std::vector<std::string>* warnings) {
    ValueRange r;
    if (config.value_range) {
        r.lo = config.value_range->first;
        r.hi = config.value_range->second;
    } else {
        r.lo = std::numeric_limits<double>::infinity();
        r.hi = -r.lo;
        for (std::size_t c = 0; c < px.cells.size(); ++c) {
            if (!px.cells[c].is_observed()) continue;
            r.lo = std::min(r.lo, px.display[c]);
            r.hi = std::max(r.hi, px.display[c]);
        }
        if (r.lo > r.hi) return r;  // nothing observed
    }
    if (!(r.hi > r.lo)) {
        r.degenerate = true;
        if (warnings) {
            warnings->emplace_back("display values span a single value; observed cells use the first palette stop");
        }
    }
    return r;
}

Rgb cell_color(const PixelatedGrid& px, std::size_t c, const RenderConfig& config, const ValueRange& range) {
    switch (px.cells[c].kind) {
        case CellKind::Missing: return config.missing_color;
        case CellKind::CertainZero: return config.zero_color;
        case CellKind::Observed: break;
    }
    if (range.degenerate) return config.palette.front();
    return palette_color(config.palette, palette_position(px.display[c], range.lo, range.hi));
}

void paint_legend(Image& img, int map_height, const RenderConfig& config) {
    for (int y = map_height; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double t = img.width > 1 ? static_cast<double>(x) / (img.width - 1) : 0.0;
            img.set(x, y, palette_color(config.palette, t));
        }
    }
}

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

void png_sink(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

struct PngSource {
    std::span<const std::uint8_t> bytes;
    std::size_t offset = 0;
};

void png_source(png_structp png, png_bytep data, png_size_t length) {
    auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
    if (src->offset + length > src->bytes.size()) png_error(png, "truncated PNG");
    std::memcpy(data, src->bytes.data() + src->offset, length);
    src->offset += length;
}

}  // namespace

std::vector<Rgb> default_palette() {
    return {{255, 247, 236}, {253, 212, 158}, {252, 141, 89}, {215, 48, 31}, {127, 0, 0}};
}

double palette_position(double z, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    return std::clamp((z - lo) / (hi - lo), 0.0, 1.0);
}

Rgb palette_color(std::span<const Rgb> palette, double position) {
    const double t = std::clamp(position, 0.0, 1.0) * static_cast<double>(palette.size() - 1);
    const auto k = std::min(static_cast<std::size_t>(t), palette.size() - 2);
    const double f = t - static_cast<double>(k);
    auto mix = [f](std::uint8_t a, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::lround(a + f * (static_cast<double>(b) - a)));
    };
    const Rgb& a = palette[k];
    const Rgb& b = palette[k + 1];
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

Image rasterize_map(const PixelatedGrid& px, const RenderConfig& config, std::vector<std::string>* warnings) {
    validate(config);
    const int ppc = config.px_per_cell;
    Image img;
    img.width = image_extent(px.spec.n_x, ppc);
    const int map_height = image_extent(px.spec.n_y, ppc);
    img.height = map_height + (config.legend ? kLegendHeight : 0);
    img.rgb.assign(3 * static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height), 0);
    const ValueRange range = display_range(px, config, warnings);

#pragma omp parallel for
    for (int y = 0; y < map_height; ++y) {
        const std::int64_t j = px.spec.n_y - 1 - y / ppc;
        for (int x = 0; x < img.width; ++x) {
            img.set(x, y, cell_color(px, px.spec.index(x / ppc, j), config, range));
        }
    }
    if (config.legend) paint_legend(img, map_height, config);
    return img;
}

Image rasterize_allocation(const BigPixelPartition& partition, const AllocationMap& alloc,
                           const RenderConfig& config) {
    validate(config);
    if (alloc.intervals.size() != partition.pixels.size()) {
        throw Error(ErrorCode::InconsistentInputs, "allocation does not match the partition");
    }
    const int ppc = config.px_per_cell;
    const int K = alloc.num_intervals;
    std::vector<Rgb> tones(static_cast<std::size_t>(K) + 1, config.missing_color);
    for (int k = 1; k <= K; ++k) {
        const double t = K == 1 ? 1.0 : static_cast<double>(k - 1) / (K - 1);
        tones[static_cast<std::size_t>(k)] = palette_color(config.palette, t);
    }

    Image img;
    img.width = image_extent(partition.n_x, ppc);
    img.height = image_extent(partition.n_y, ppc);
    img.rgb.assign(3 * static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height), 0);

#pragma omp parallel for
    for (int y = 0; y < img.height; ++y) {
        const std::int64_t j = partition.n_y - 1 - y / ppc;
        for (int x = 0; x < img.width; ++x) {
            const std::int64_t i = x / ppc;
            const auto p = partition.index(i / partition.big_side, j / partition.big_side);
            img.set(x, y, tones[static_cast<std::size_t>(alloc.intervals[p])]);
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    std::vector<std::uint8_t> out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(ErrorCode::IoError, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::IoError, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_sink, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_UP);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        auto* row = const_cast<png_bytep>(image.rgb.data() + 3 * static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width));
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw Error(ErrorCode::ParseError, "not a PNG stream");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(ErrorCode::IoError, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(ErrorCode::IoError, "png_create_info_struct failed");
    }
    Image img;
    PngSource src{bytes, 0};
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::ParseError, "PNG decoding failed");
    }
    png_set_read_fn(png, &src, png_source);
    png_read_info(png, info);
    if (png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB || png_get_bit_depth(png, info) != 8) {
        png_error(png, "only 8-bit RGB is supported");
    }
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.rgb.resize(3 * static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        png_read_row(png, img.rgb.data() + 3 * static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width), nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

std::vector<std::uint8_t> render_map(const PixelatedGrid& pixelated, const RenderConfig& config,
                                     std::vector<std::string>* warnings) {
    return encode_png(rasterize_map(pixelated, config, warnings));
}

std::vector<std::uint8_t> render_allocation(const BigPixelPartition& partition, const AllocationMap& alloc,
                                            const RenderConfig& config) {
    return encode_png(rasterize_allocation(partition, alloc, config));
}

std::string render_svg(const PixelatedGrid& px, const RenderConfig& config, std::vector<std::string>* warnings) {
    validate(config);
    const std::int64_t ppc = config.px_per_cell;
    const std::int64_t w = px.spec.n_x * ppc;
    const std::int64_t h = px.spec.n_y * ppc;
    const ValueRange range = display_range(px, config, warnings);

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                      std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " +
                      std::to_string(w) + ' ' + std::to_string(h) + "\" shape-rendering=\"crispEdges\">\n";
    auto rect = [&](const CellRange& r, Rgb color) {
        out += "<rect x=\"" + std::to_string(r.i0 * ppc) + "\" y=\"" + std::to_string((px.spec.n_y - r.j1) * ppc) +
               "\" width=\"" + std::to_string(r.width() * ppc) + "\" height=\"" + std::to_string(r.height() * ppc) +
               "\" fill=\"" + hex(color) + "\"/>\n";
    };
    for (const auto& p : px.pixels) {
        const Rgb color = range.degenerate
                              ? config.palette.front()
                              : palette_color(config.palette, palette_position(p.prediction_mean, range.lo, range.hi));
        rect(p.bounds, color);
    }
    for (std::int64_t j = 0; j < px.spec.n_y; ++j) {
        for (std::int64_t i = 0; i < px.spec.n_x; ++i) {
            const Cell& c = px.cells[px.spec.index(i, j)];
            if (c.is_observed()) continue;
            rect({i, i + 1, j, j + 1}, c.kind == CellKind::Missing ? config.missing_color : config.zero_color);
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace pixelate
