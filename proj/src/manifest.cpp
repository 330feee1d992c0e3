#include "pixelate/manifest.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <sstream>

#include "pixelate/error.hpp"
#include "pixelate/raster_io.hpp"

#ifndef PIXELATE_VERSION
#define PIXELATE_VERSION "0.0.0"
#endif

namespace pixelate {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_int(std::string_view key, std::string_view text) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "manifest key '" + std::string(key) + "': bad integer '" + std::string(text) + "'");
    }
    return v;
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "manifest key '" + std::string(key) + "': bad number '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw Error(ErrorCode::ParseError, "manifest key '" + std::string(key) + "': expected true or false");
}

}  // namespace

std::string_view library_version() { return PIXELATE_VERSION; }

std::string sha256_digest(std::span<const std::uint8_t> bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 digest failed");
    }
    std::string out = "sha256:";
    char hex[3];
    for (unsigned int k = 0; k < len; ++k) {
        std::snprintf(hex, sizeof hex, "%02x", md[k]);
        out += hex;
    }
    return out;
}

std::string sha256_digest(std::string_view bytes) {
    return sha256_digest(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string format_manifest(const RunManifest& m) {
    std::ostringstream out;
    out << "# pixelate run manifest\n";
    out << "version = " << m.version << '\n';
    out << "command = " << m.command << '\n';
    out << "input = " << m.input << '\n';
    out << "input_z = " << m.input_z << '\n';
    out << "input_u = " << m.input_u << '\n';
    out << "input_digest = " << m.input_digest << '\n';
    out << "uncertainty_mode = " << m.uncertainty_mode << '\n';
    out << "num_sizes = " << m.params.num_sizes << '\n';
    out << "scale = " << to_string(m.params.mode) << '\n';
    out << "factor = " << m.params.factor << '\n';
    out << "min_big = " << m.params.min_big.x << ',' << m.params.min_big.y << '\n';
    out << "zero_tol = " << format_number(m.zero_tol) << '\n';
    out << "px_per_cell = " << m.px_per_cell << '\n';
    out << "legend = " << (m.legend ? "true" : "false") << '\n';
    out << "svg = " << (m.svg ? "true" : "false") << '\n';
    out << "out_prefix = " << m.out_prefix << '\n';
    out << "ladder = " << m.ladder << '\n';
    out << "big_pixels = " << m.big_pixels << '\n';
    for (const auto& [suffix, digest] : m.outputs) {
        out << "output" << suffix << " = " << digest << '\n';
    }
    return out.str();
}

RunManifest parse_manifest(std::string_view text) {
    RunManifest m;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ParseError, "manifest line " + std::to_string(line_no) + " has no '='");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const std::string v(value);

        if (key == "version") m.version = v;
        else if (key == "command") m.command = v;
        else if (key == "input") m.input = v;
        else if (key == "input_z") m.input_z = v;
        else if (key == "input_u") m.input_u = v;
        else if (key == "input_digest") m.input_digest = v;
        else if (key == "uncertainty_mode") m.uncertainty_mode = v;
        else if (key == "num_sizes") m.params.num_sizes = parse_int<int>(key, value);
        else if (key == "scale") {
            const auto mode = parse_scale_mode(value);
            if (!mode) throw Error(ErrorCode::ParseError, "manifest scale must be imult or iexpn");
            m.params.mode = *mode;
        }
        else if (key == "factor") m.params.factor = parse_int<int>(key, value);
        else if (key == "min_big") {
            const auto comma = value.find(',');
            if (comma == std::string_view::npos) throw Error(ErrorCode::ParseError, "manifest min_big must be LX,LY");
            m.params.min_big = {parse_int<std::int64_t>(key, trim(value.substr(0, comma))),
                                parse_int<std::int64_t>(key, trim(value.substr(comma + 1)))};
        }
        else if (key == "zero_tol") m.zero_tol = parse_real(key, value);
        else if (key == "px_per_cell") m.px_per_cell = parse_int<int>(key, value);
        else if (key == "legend") m.legend = parse_bool(key, value);
        else if (key == "svg") m.svg = parse_bool(key, value);
        else if (key == "out_prefix") m.out_prefix = v;
        else if (key == "ladder") m.ladder = v;
        else if (key == "big_pixels") m.big_pixels = v;
        else if (key.starts_with("output.")) m.outputs[std::string(key.substr(6))] = v;
        else {
            throw Error(ErrorCode::SchemaError, "manifest line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    return m;
}

}  // namespace pixelate
