#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "pixelate/engine.hpp"
#include "pixelate/grid.hpp"

namespace pixelate {

/// Column layout of an input CSV:
///   PointUncertainty: x,y,z,u
///   Interval:         x,y,z,z_lo,z_hi   (u = z_hi - z_lo)
/// Missing numbers are an empty field or `NA`.
enum class CsvMode { PointUncertainty, Interval };

std::string_view to_string(CsvMode mode);

PredictionGrid parse_csv(std::istream& in, double zero_tol = 0.0, CsvMode* mode = nullptr);
PredictionGrid read_csv(const std::filesystem::path& path, double zero_tol = 0.0,
                        CsvMode* mode = nullptr);

/// Writes x,y,z,u with 17 significant digits; Missing cells as NA.
std::string format_grid_csv(const PredictionGrid& grid);
void write_grid_csv(const PredictionGrid& grid, const std::filesystem::path& path);

/// ESRI ASCII grid pair (prediction layer, uncertainty layer) with identical
/// headers. NODATA in either layer marks the cell Missing.
PredictionGrid parse_ascii_grid_pair(std::istream& z_in, std::istream& u_in, double zero_tol = 0.0);
PredictionGrid read_ascii_grid_pair(const std::filesystem::path& z_path,
                                    const std::filesystem::path& u_path, double zero_tol = 0.0);

/// Header: x,y,state,z_display,size_class,pixel_id,pixel_u_mean. Rows are
/// row-major from the lower-left cell.
std::string format_pixelated_csv(const PixelatedGrid& pixelated);
void write_pixelated_csv(const PixelatedGrid& pixelated, const std::filesystem::path& path);

enum class TableFormat { Csv, Markdown };

std::string format_summary(const SummaryTable& table, TableFormat format);
void write_summary(const SummaryTable& table, const std::filesystem::path& path, TableFormat format);

/// One row per big pixel: big_i,big_j,i0,i1,j0,j1,included_count,avg_u,interval.
std::string format_allocation_csv(const BigPixelPartition& partition, const AllocationMap& alloc);
void write_allocation_csv(const BigPixelPartition& partition, const AllocationMap& alloc,
                          const std::filesystem::path& path);

/// %.17g; infinities print as `inf` / `-inf`.
std::string format_number(double v);

/// Whole-file read/write helpers; throw IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pixelate
