#include "pixelate/raster_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "pixelate/error.hpp"

namespace pixelate {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> to_double(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::optional<double> optional_field(std::string_view text, std::size_t line, std::string_view column) {
    if (text.empty() || text == "NA") return std::nullopt;
    const auto v = to_double(text);
    if (!v) parse_error(line, "column " + std::string(column) + ": '" + std::string(text) + "' is not a number");
    return v;
}

double required_field(std::string_view text, std::size_t line, std::string_view column) {
    const auto v = optional_field(text, line, column);
    if (!v) parse_error(line, "column " + std::string(column) + " may not be missing");
    return *v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
    return in;
}

struct AsciiHeader {
    std::int64_t ncols = 0, nrows = 0;
    double xll = 0.0, yll = 0.0, cellsize = 0.0;
    bool centered = false;
    std::optional<double> nodata;

    bool operator==(const AsciiHeader&) const = default;
};

AsciiHeader read_ascii_header(std::istream& in, const char* layer) {
    AsciiHeader h;
    std::map<std::string, double> keys;
    while (true) {
        const auto pos = in.tellg();
        std::string key;
        if (!(in >> key)) break;
        if (!std::isalpha(static_cast<unsigned char>(key.front()))) {
            in.clear();
            in.seekg(pos);
            break;
        }
        std::string value;
        if (!(in >> value)) {
            throw Error(ErrorCode::ParseError, std::string(layer) + " grid: header key '" + key + "' has no value");
        }
        const auto v = to_double(value);
        if (!v) throw Error(ErrorCode::ParseError, std::string(layer) + " grid: bad header value for '" + key + "'");
        keys[lower(key)] = *v;
    }
    auto need = [&](const char* k) {
        const auto it = keys.find(k);
        if (it == keys.end()) throw Error(ErrorCode::ParseError, std::string(layer) + " grid: header lacks " + k);
        return it->second;
    };
    h.ncols = static_cast<std::int64_t>(need("ncols"));
    h.nrows = static_cast<std::int64_t>(need("nrows"));
    h.cellsize = need("cellsize");
    if (keys.count("xllcenter") && keys.count("yllcenter")) {
        h.centered = true;
        h.xll = keys["xllcenter"];
        h.yll = keys["yllcenter"];
    } else {
        h.xll = need("xllcorner");
        h.yll = need("yllcorner");
    }
    if (const auto it = keys.find("nodata_value"); it != keys.end()) h.nodata = it->second;
    if (h.ncols < 1 || h.nrows < 1 || !(h.cellsize > 0.0)) {
        throw Error(ErrorCode::ParseError, std::string(layer) + " grid: header needs positive ncols, nrows and cellsize");
    }
    return h;
}

std::vector<double> read_ascii_values(std::istream& in, const AsciiHeader& h, const char* layer) {
    std::vector<double> values(static_cast<std::size_t>(h.ncols * h.nrows));
    std::string token;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(in >> token)) {
            throw Error(ErrorCode::ParseError, std::string(layer) + " grid: expected " +
                                                   std::to_string(values.size()) + " values, found " +
                                                   std::to_string(k));
        }
        const auto v = to_double(token);
        if (!v) {
            throw Error(ErrorCode::ParseError, std::string(layer) + " grid: row " +
                                                   std::to_string(k / static_cast<std::size_t>(h.ncols) + 1) +
                                                   ": '" + token + "' is not a number");
        }
        values[k] = *v;
    }
    return values;
}

const char* state_name(CellKind kind) {
    switch (kind) {
        case CellKind::Observed: return "obs";
        case CellKind::Missing: return "missing";
        case CellKind::CertainZero: return "zero";
    }
    return "?";
}

}  // namespace

std::string_view to_string(CsvMode mode) {
    return mode == CsvMode::PointUncertainty ? "u" : "interval";
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

PredictionGrid parse_csv(std::istream& in, double zero_tol, CsvMode* mode_out) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<CsvMode> mode;
    while (!mode && std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cols;
        for (auto c : split(line, ',')) cols.push_back(lower(c));
        if (cols == std::vector<std::string>{"x", "y", "z", "u"}) {
            mode = CsvMode::PointUncertainty;
        } else if (cols == std::vector<std::string>{"x", "y", "z", "z_lo", "z_hi"}) {
            mode = CsvMode::Interval;
        } else {
            throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": header '" +
                                                    std::string(trim(line)) +
                                                    "' is neither x,y,z,u nor x,y,z,z_lo,z_hi");
        }
    }
    if (!mode) throw Error(ErrorCode::SchemaError, "empty input, no header");
    const std::size_t width = *mode == CsvMode::PointUncertainty ? 4 : 5;

    std::vector<Record> records;
    std::vector<std::size_t> record_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != width) {
            parse_error(line_no, "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
        }
        Record rec;
        rec.x = required_field(f[0], line_no, "x");
        rec.y = required_field(f[1], line_no, "y");
        rec.value = optional_field(f[2], line_no, "z");
        if (*mode == CsvMode::PointUncertainty) {
            rec.uncertainty = optional_field(f[3], line_no, "u");
        } else {
            const auto lo = optional_field(f[3], line_no, "z_lo");
            const auto hi = optional_field(f[4], line_no, "z_hi");
            if (lo && hi) {
                if (!std::isfinite(*lo) || !std::isfinite(*hi)) {
                    throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(line_no) + ": non-finite interval bound");
                }
                try {
                    rec.uncertainty = derive_uncertainty(*lo, *hi);
                } catch (const Error& e) {
                    throw Error(e.code(), "line " + std::to_string(line_no) + ": z_lo " + format_number(*lo) +
                                              " > z_hi " + format_number(*hi));
                }
            }
        }
        records.push_back(rec);
        record_line.push_back(line_no);
    }
    if (records.empty()) throw Error(ErrorCode::SchemaError, "no data rows after the header");
    if (mode_out) *mode_out = *mode;

    try {
        return build_grid(records, zero_tol);
    } catch (const Error& e) {
        if (!e.record()) throw;
        throw Error(e.code(), "line " + std::to_string(record_line[*e.record()]) + ": " + e.what(), e.record());
    }
}

PredictionGrid read_csv(const std::filesystem::path& path, double zero_tol, CsvMode* mode) {
    auto in = open_input(path);
    return parse_csv(in, zero_tol, mode);
}

std::string format_grid_csv(const PredictionGrid& grid) {
    std::string out = "x,y,z,u\n";
    for (const auto& rec : to_records(grid)) {
        out += format_number(rec.x) + ',' + format_number(rec.y) + ',';
        out += rec.value ? format_number(*rec.value) : "NA";
        out += ',';
        out += rec.uncertainty ? format_number(*rec.uncertainty) : "NA";
        out += '\n';
    }
    return out;
}

void write_grid_csv(const PredictionGrid& grid, const std::filesystem::path& path) {
    write_file(path, format_grid_csv(grid));
}

PredictionGrid parse_ascii_grid_pair(std::istream& z_in, std::istream& u_in, double zero_tol) {
    const auto hz = read_ascii_header(z_in, "prediction");
    const auto hu = read_ascii_header(u_in, "uncertainty");
    if (!(hz == hu)) {
        throw Error(ErrorCode::HeaderMismatch, "prediction and uncertainty grids have different headers");
    }
    const auto z = read_ascii_values(z_in, hz, "prediction");
    const auto u = read_ascii_values(u_in, hu, "uncertainty");

    const double half = hz.centered ? 0.0 : 0.5 * hz.cellsize;
    const LatticeSpec spec{hz.xll + half, hz.yll + half, hz.cellsize, hz.cellsize, hz.ncols, hz.nrows};
    std::vector<Cell> cells(spec.cell_count(), Cell::missing());
    for (std::int64_t row = 0; row < hz.nrows; ++row) {
        const std::int64_t j = hz.nrows - 1 - row;  // file is top row first
        for (std::int64_t i = 0; i < hz.ncols; ++i) {
            const auto k = static_cast<std::size_t>(row * hz.ncols + i);
            if (hz.nodata && (z[k] == *hz.nodata || u[k] == *hz.nodata)) continue;
            if (!std::isfinite(z[k]) || !std::isfinite(u[k])) {
                throw Error(ErrorCode::NonFiniteValue, "row " + std::to_string(row + 1) + ", column " + std::to_string(i + 1));
            }
            if (u[k] < 0.0) {
                throw Error(ErrorCode::NegativeUncertainty, "row " + std::to_string(row + 1) + ", column " +
                                                                std::to_string(i + 1) + ": " + format_number(u[k]));
            }
            cells[spec.index(i, j)] = classify_cell(z[k], u[k], zero_tol);
        }
    }
    return PredictionGrid(spec, std::move(cells));
}

PredictionGrid read_ascii_grid_pair(const std::filesystem::path& z_path,
                                    const std::filesystem::path& u_path, double zero_tol) {
    auto z = open_input(z_path);
    auto u = open_input(u_path);
    return parse_ascii_grid_pair(z, u, zero_tol);
}

std::string format_pixelated_csv(const PixelatedGrid& px) {
    std::string out = "x,y,state,z_display,size_class,pixel_id,pixel_u_mean\n";
    out.reserve(out.size() + px.cells.size() * 64);
    for (std::int64_t j = 0; j < px.spec.n_y; ++j) {
        for (std::int64_t i = 0; i < px.spec.n_x; ++i) {
            const auto c = px.spec.index(i, j);
            const Cell& cell = px.cells[c];
            out += format_number(px.spec.center_x(i)) + ',' + format_number(px.spec.center_y(j)) + ',' +
                   state_name(cell.kind) + ',';
            switch (cell.kind) {
                case CellKind::Observed: {
                    const auto& p = px.pixels[static_cast<std::size_t>(px.pixel[c])];
                    out += format_number(px.display[c]) + ',' + std::to_string(px.size_class[c]) + ',' +
                           std::to_string(p.id) + ',' + format_number(p.uncertainty_mean);
                    break;
                }
                case CellKind::CertainZero:
                    out += format_number(cell.value) + ",,,";
                    break;
                case CellKind::Missing:
                    out += ",,,";
                    break;
            }
            out += '\n';
        }
    }
    return out;
}

void write_pixelated_csv(const PixelatedGrid& pixelated, const std::filesystem::path& path) {
    write_file(path, format_pixelated_csv(pixelated));
}

std::string format_summary(const SummaryTable& table, TableFormat format) {
    std::string out;
    if (format == TableFormat::Csv) {
        out = "size_class,side_cells,side_w,side_h,big_pixel_count,u_lower,u_upper,cells_per_full_pixel\n";
        for (const auto& r : table) {
            out += std::to_string(r.size_class) + ',' + std::to_string(r.side_cells) + ',' +
                   format_number(r.side_w) + ',' + format_number(r.side_h) + ',' +
                   std::to_string(r.big_pixel_count) + ',' + format_number(r.u_lower) + ',' +
                   format_number(r.u_upper) + ',' + std::to_string(r.cells_per_full_pixel) + '\n';
        }
        return out;
    }
    auto short_num = [](double v) {
        if (std::isinf(v)) return std::string(v > 0 ? "+inf" : "-inf");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    out = "| size class | side (cells) | side (units) | big pixels | avg uncertainty | cells per pixel |\n"
          "|---:|---:|---|---:|---|---:|\n";
    for (const auto& r : table) {
        out += "| " + std::to_string(r.size_class) + " | " + std::to_string(r.side_cells) + " | " +
               short_num(r.side_w) + " x " + short_num(r.side_h) + " | " + std::to_string(r.big_pixel_count) +
               " | (" + short_num(r.u_lower) + ", " + short_num(r.u_upper) + (std::isinf(r.u_upper) ? ")" : "]") +
               " | " + std::to_string(r.cells_per_full_pixel) + " |\n";
    }
    return out;
}

void write_summary(const SummaryTable& table, const std::filesystem::path& path, TableFormat format) {
    write_file(path, format_summary(table, format));
}

std::string format_allocation_csv(const BigPixelPartition& partition, const AllocationMap& alloc) {
    std::string out = "big_i,big_j,i0,i1,j0,j1,included_count,avg_u,interval\n";
    for (std::int64_t bj = 0; bj < partition.n_big_y; ++bj) {
        for (std::int64_t bi = 0; bi < partition.n_big_x; ++bi) {
            const auto p = partition.index(bi, bj);
            const auto& bp = partition.pixels[p];
            out += std::to_string(bi) + ',' + std::to_string(bj) + ',' + std::to_string(bp.range.i0) + ',' +
                   std::to_string(bp.range.i1) + ',' + std::to_string(bp.range.j0) + ',' +
                   std::to_string(bp.range.j1) + ',' + std::to_string(bp.included_count) + ',' +
                   (bp.avg_uncertainty ? format_number(*bp.avg_uncertainty) : std::string()) + ',' +
                   (alloc.intervals[p] > 0 ? std::to_string(alloc.intervals[p]) : std::string()) + '\n';
        }
    }
    return out;
}

void write_allocation_csv(const BigPixelPartition& partition, const AllocationMap& alloc,
                          const std::filesystem::path& path) {
    write_file(path, format_allocation_csv(partition, alloc));
}

}  // namespace pixelate
