#include "cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <iostream>
#include <sstream>

#include "pixelate/error.hpp"
#include "pixelate/manifest.hpp"
#include "pixelate/pipeline.hpp"
#include "pixelate/raster_io.hpp"
#include "pixelate/render.hpp"
#include "pixelate/synth.hpp"

namespace pixelate::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineOptions {
    std::string input, input_z, input_u, manifest;
    int num_sizes = 6;
    std::string scale = "imult";
    int factor = 1;
    std::string min_big = "12,12";
    double zero_tol = 0.0;
    std::string out_prefix;
    int px_per_cell = 1;
    bool legend = false;
    bool svg = false;
    std::string format = "csv";
};

void add_pipeline_options(CLI::App* sub, PipelineOptions& o) {
    sub->add_option("--input", o.input, "CSV input (x,y,z,u or x,y,z,z_lo,z_hi)");
    sub->add_option("--input-z", o.input_z, "ASCII-grid prediction layer");
    sub->add_option("--input-u", o.input_u, "ASCII-grid uncertainty layer");
    sub->add_option("--manifest", o.manifest, "re-drive a run from its manifest; explicit flags override it");
    sub->add_option("--num-sizes", o.num_sizes, "number of pixel sizes K")->capture_default_str();
    sub->add_option("--scale", o.scale, "imult or iexpn")->capture_default_str();
    sub->add_option("--factor", o.factor, "scale factor c")->capture_default_str();
    sub->add_option("--min-big", o.min_big, "lower bound on big pixels per axis, LX,LY")->capture_default_str();
    sub->add_option("--zero-tol", o.zero_tol, "tolerance for certain zeros")->capture_default_str();
    sub->add_option("--out-prefix", o.out_prefix, "prefix for output files");
    sub->add_option("--px-per-cell", o.px_per_cell, "image pixels per lattice cell")->capture_default_str();
    sub->add_flag("--legend", o.legend, "append a palette strip to the map image");
    sub->add_flag("--svg", o.svg, "also write <prefix>.map.svg");
}

MinBig parse_min_big(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) {
            const auto v = std::stoll(text);
            return {v, v};
        }
        return {std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("--min-big expects LX,LY, got '" + text + "'");
    }
}

// Fills the manifest from the manifest file (when given) and then from every
// flag the user passed explicitly.
RunManifest resolve(const CLI::App* sub, const PipelineOptions& o, const std::string& command) {
    RunManifest m;
    const bool from_manifest = !o.manifest.empty();
    if (from_manifest) m = parse_manifest(read_file(o.manifest));
    m.command = command;
    m.version = std::string(library_version());
    auto given = [&](const char* flag) { return !from_manifest || sub->count(flag) > 0; };

    if (sub->count("--input") || sub->count("--input-z") || sub->count("--input-u")) {
        m.input = o.input;
        m.input_z = o.input_z;
        m.input_u = o.input_u;
        m.input_digest.clear();
    }
    if (given("--num-sizes")) m.params.num_sizes = o.num_sizes;
    if (given("--scale")) {
        const auto mode = parse_scale_mode(o.scale);
        if (!mode) throw UsageError("--scale must be imult or iexpn");
        m.params.mode = *mode;
    }
    if (given("--factor")) m.params.factor = o.factor;
    if (given("--min-big")) m.params.min_big = parse_min_big(o.min_big);
    if (given("--zero-tol")) m.zero_tol = o.zero_tol;
    if (given("--out-prefix")) m.out_prefix = o.out_prefix;
    if (given("--px-per-cell")) m.px_per_cell = o.px_per_cell;
    if (given("--legend")) m.legend = o.legend;
    if (given("--svg")) m.svg = o.svg;

    const bool csv = !m.input.empty();
    const bool pair = !m.input_z.empty() || !m.input_u.empty();
    if (csv == pair || (pair && (m.input_z.empty() || m.input_u.empty()))) {
        throw UsageError("give either --input <csv> or both --input-z and --input-u");
    }
    if (m.params.num_sizes < 1 || m.params.factor < 1) throw UsageError("--num-sizes and --factor must be >= 1");
    if (m.px_per_cell < 1) throw UsageError("--px-per-cell must be >= 1");
    if (!(m.zero_tol >= 0.0)) throw UsageError("--zero-tol must be >= 0");
    return m;
}

PredictionGrid load_input(RunManifest& m) {
    PredictionGrid grid;
    std::string digest;
    if (!m.input.empty()) {
        const std::string bytes = read_file(m.input);
        digest = sha256_digest(bytes);
        std::istringstream in(bytes);
        CsvMode mode{};
        grid = parse_csv(in, m.zero_tol, &mode);
        m.uncertainty_mode = std::string(to_string(mode));
    } else {
        const std::string z = read_file(m.input_z);
        const std::string u = read_file(m.input_u);
        digest = sha256_digest(z + u);
        std::istringstream zin(z), uin(u);
        grid = parse_ascii_grid_pair(zin, uin, m.zero_tol);
        m.uncertainty_mode = "ascii-pair";
    }
    if (!m.input_digest.empty() && m.input_digest != digest) {
        throw UsageError("input content digest " + digest + " does not match the manifest's " + m.input_digest);
    }
    m.input_digest = digest;
    return grid;
}

std::string join_sizes(const SizeLadder& ladder) {
    std::string s;
    for (std::size_t k = 0; k < ladder.sizes.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(ladder.sizes[k]);
    }
    return s;
}

class OutputSet {
public:
    OutputSet(RunManifest& m) : m_(m) {}

    void put(const std::string& suffix, std::string_view bytes) {
        write_file(m_.out_prefix + suffix, bytes);
        m_.outputs[suffix] = sha256_digest(bytes);
    }
    void put(const std::string& suffix, const std::vector<std::uint8_t>& bytes) {
        put(suffix, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }

private:
    RunManifest& m_;
};

int run_pipeline_command(const CLI::App* sub, const PipelineOptions& o, const std::string& command,
                         std::ostream& out, std::ostream& err) {
    RunManifest m = resolve(sub, o, command);
    if (m.out_prefix.empty() && command != "summarize") throw UsageError("--out-prefix is required");
    const PredictionGrid grid = load_input(m);

    const PipelineResult r = run_pipeline(grid, m.params);
    m.ladder = join_sizes(r.ladder);
    m.big_pixels = std::to_string(r.partition.n_big_x) + "x" + std::to_string(r.partition.n_big_y);
    m.outputs.clear();

    std::vector<std::string> warnings = r.alloc.warnings;
    RenderConfig render;
    render.px_per_cell = m.px_per_cell;
    render.legend = m.legend;
    const TableFormat format = o.format == "markdown" ? TableFormat::Markdown : TableFormat::Csv;

    OutputSet outputs(m);
    if (command == "pixelate") {
        outputs.put(".pixelated.csv", format_pixelated_csv(r.pixelated));
        outputs.put(".map.png", render_map(r.pixelated, render, &warnings));
        outputs.put(".alloc.png", render_allocation(r.partition, r.alloc, render));
        outputs.put(".alloc.csv", format_allocation_csv(r.partition, r.alloc));
        outputs.put(".summary.csv", format_summary(r.summary, TableFormat::Csv));
        if (m.svg) outputs.put(".map.svg", render_svg(r.pixelated, render));
    } else if (command == "allocate") {
        outputs.put(".alloc.png", render_allocation(r.partition, r.alloc, render));
    } else if (m.out_prefix.empty()) {
        out << format_summary(r.summary, format);
    } else {
        outputs.put(format == TableFormat::Csv ? ".summary.csv" : ".summary.md", format_summary(r.summary, format));
    }

    for (const auto& w : warnings) err << "warning: " << w << '\n';
    if (!m.out_prefix.empty()) {
        const std::string text = format_manifest(m);
        write_file(m.out_prefix + ".manifest.txt", text);
        out << "ladder " << m.ladder << "; big pixels " << m.big_pixels << "; manifest "
            << m.out_prefix << ".manifest.txt (" << sha256_digest(text) << ")\n";
    }
    return kExitOk;
}

CellRange parse_rect(const std::string& text) {
    std::array<std::int64_t, 4> v{};
    std::istringstream in(text);
    char comma = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(in >> v[k]) || (k + 1 < v.size() && (!(in >> comma) || comma != ','))) {
            throw UsageError("--missing-rect expects I0,I1,J0,J1, got '" + text + "'");
        }
    }
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive pixelation of gridded predictions by their uncertainty", "pixelate"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));

    PipelineOptions pix, alloc, summ;
    auto* cmd_pixelate = app.add_subcommand("pixelate", "full run: pixelated CSV, map and allocation PNGs, summary, manifest");
    add_pipeline_options(cmd_pixelate, pix);
    auto* cmd_allocate = app.add_subcommand("allocate", "write only the quantile allocation image");
    add_pipeline_options(cmd_allocate, alloc);
    auto* cmd_summarize = app.add_subcommand("summarize", "write only the pixel-size summary table");
    add_pipeline_options(cmd_summarize, summ);
    cmd_summarize->add_option("--format", summ.format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();

    SyntheticConfig synth;
    std::string bundled, synth_out, missing_rect;
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic prediction/uncertainty field as x,y,z,u CSV");
    cmd_synth->add_option("--bundled", bundled, "demo_small or demo_acceptance");
    cmd_synth->add_option("--seed", synth.seed);
    cmd_synth->add_option("--nx", synth.n_x);
    cmd_synth->add_option("--ny", synth.n_y);
    cmd_synth->add_option("--cell-w", synth.cell_w);
    cmd_synth->add_option("--cell-h", synth.cell_h);
    cmd_synth->add_option("--bumps", synth.num_bumps);
    cmd_synth->add_option("--sites", synth.num_sites);
    cmd_synth->add_option("--range", synth.range, "correlation length in projection units");
    cmd_synth->add_option("--base-u", synth.base_u, "uncertainty far from every site");
    cmd_synth->add_option("--missing-rect", missing_rect, "cell range I0,I1,J0,J1 to blank out");
    cmd_synth->add_option("--zero-threshold", synth.zero_threshold);
    cmd_synth->add_option("--out", synth_out, "output CSV path")->required();

    std::vector<const char*> argv{"pixelate"};
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << library_version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
        err << (sub ? sub->help() : app.help());
        return kExitInvalid;
    }

    try {
        if (cmd_synth->parsed()) {
            SyntheticConfig config = bundled.empty() ? SyntheticConfig{} : bundled_config(bundled);
            // Explicit flags refine the bundled preset.
            auto take = [&](const char* flag, auto& field, const auto& value) {
                if (cmd_synth->count(flag)) field = value;
            };
            take("--seed", config.seed, synth.seed);
            take("--nx", config.n_x, synth.n_x);
            take("--ny", config.n_y, synth.n_y);
            take("--cell-w", config.cell_w, synth.cell_w);
            take("--cell-h", config.cell_h, synth.cell_h);
            take("--bumps", config.num_bumps, synth.num_bumps);
            take("--sites", config.num_sites, synth.num_sites);
            take("--range", config.range, synth.range);
            take("--base-u", config.base_u, synth.base_u);
            take("--zero-threshold", config.zero_threshold, synth.zero_threshold);
            if (!missing_rect.empty()) config.missing_rect = parse_rect(missing_rect);
            write_grid_csv(generate_field(config), synth_out);
            return kExitOk;
        }
        if (cmd_pixelate->parsed()) return run_pipeline_command(cmd_pixelate, pix, "pixelate", out, err);
        if (cmd_allocate->parsed()) return run_pipeline_command(cmd_allocate, alloc, "allocate", out, err);
        return run_pipeline_command(cmd_summarize, summ, "summarize", out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::IoError ? kExitIo : kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace pixelate::cli
