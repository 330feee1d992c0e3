#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "pixelate/pipeline.hpp"

namespace pixelate {

std::string_view library_version();

/// "sha256:<hex>" of the given bytes.
std::string sha256_digest(std::span<const std::uint8_t> bytes);
std::string sha256_digest(std::string_view bytes);

/// Everything needed to reproduce one CLI run, plus the digests of what it
/// produced. Serialized as `key = value` lines; see format_manifest.
struct RunManifest {
    std::string version{library_version()};
    std::string command = "pixelate";
    std::string input;    // CSV path, or empty
    std::string input_z;  // ASCII-grid pair, or empty
    std::string input_u;
    std::string input_digest;
    std::string uncertainty_mode;  // u | interval | ascii-pair
    PixelationParams params;
    double zero_tol = 0.0;
    int px_per_cell = 1;
    bool legend = false;
    bool svg = false;
    std::string out_prefix;

    // Reported results; ignored when re-driving a run.
    std::string ladder;
    std::string big_pixels;
    std::map<std::string, std::string> outputs;  // artifact suffix -> digest
};

std::string format_manifest(const RunManifest& manifest);

/// Throws ParseError on malformed lines, SchemaError on unknown keys.
RunManifest parse_manifest(std::string_view text);

}  // namespace pixelate
