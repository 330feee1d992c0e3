#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pixelate/grid.hpp"
#include "pixelate/ladder.hpp"

namespace pixelate {

/// SplitMix64 (Steele, Lea & Flood 2014). Fixed here so generated fields are
/// identical across compilers and standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent child stream; advances this generator by one step.
    SplitMix64 split() { return SplitMix64(next() ^ 0x6A09E667F3BCC909ULL); }

private:
    std::uint64_t state_;
};

struct SyntheticConfig {
    std::uint64_t seed = 1;
    std::int64_t n_x = 64;
    std::int64_t n_y = 64;
    double cell_w = 1.0;
    double cell_h = 1.0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    int num_bumps = 4;
    int num_sites = 3;
    double range = 8.0;  // correlation length, projection units
    double base_u = 1.0;
    std::optional<CellRange> missing_rect;
    double zero_threshold = 0.0;
};

struct Bump {
    double amplitude, center_x, center_y, width;
};

struct Site {
    double x, y;
};

/// The continuous surfaces behind a generated field.
///   mean(x)        = sum_g a_g exp(-|x - c_g|^2 / (2 w_g^2))
///   uncertainty(x) = base_u (1 - max_j exp(-|x - site_j|^2 / (2 rho^2)))
/// The max over an empty site set is 0.
class SyntheticSurface {
public:
    explicit SyntheticSurface(const SyntheticConfig& config);

    double mean(double x, double y) const;
    double uncertainty(double x, double y) const;

    const std::vector<Bump>& bumps() const { return bumps_; }
    const std::vector<Site>& sites() const { return sites_; }

private:
    std::vector<Bump> bumps_;
    std::vector<Site> sites_;
    double range_;
    double base_u_;
};

/// Throws InconsistentInputs on an invalid config.
PredictionGrid generate_field(const SyntheticConfig& config);

/// "demo_small" or "demo_acceptance"; throws UnknownDataset otherwise.
SyntheticConfig bundled_config(std::string_view name);
PredictionGrid bundled_dataset(std::string_view name);

}  // namespace pixelate
