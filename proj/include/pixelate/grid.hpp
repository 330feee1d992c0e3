#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pixelate {

/// Regular lattice geometry. Coordinates are cell centers; (0, 0) is the
/// lower-left cell and cells are stored row-major (x fastest).
struct LatticeSpec {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_w = 1.0;
    double cell_h = 1.0;
    std::int64_t n_x = 1;
    std::int64_t n_y = 1;

    std::size_t cell_count() const { return static_cast<std::size_t>(n_x * n_y); }
    std::size_t index(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>(j * n_x + i);
    }
    double center_x(std::int64_t i) const { return origin_x + static_cast<double>(i) * cell_w; }
    double center_y(std::int64_t j) const { return origin_y + static_cast<double>(j) * cell_h; }

    bool operator==(const LatticeSpec&) const = default;
};

enum class CellKind : std::uint8_t { Observed, Missing, CertainZero };

/// One lattice cell. Missing cells carry NaN value/uncertainty; CertainZero
/// keeps the (near-zero) numbers it was classified from so it can be
/// reproduced verbatim on output.
struct Cell {
    CellKind kind = CellKind::Missing;
    double value = 0.0;
    double uncertainty = 0.0;

    static Cell observed(double value, double uncertainty) {
        return {CellKind::Observed, value, uncertainty};
    }
    static Cell missing();
    static Cell certain_zero(double value, double uncertainty) {
        return {CellKind::CertainZero, value, uncertainty};
    }

    bool is_observed() const { return kind == CellKind::Observed; }

    /// Bit-level equality (NaN payloads included).
    friend bool operator==(const Cell& a, const Cell& b);
};

class PredictionGrid {
public:
    PredictionGrid() = default;
    /// Throws InconsistentInputs when cells.size() != n_x*n_y or an Observed
    /// cell violates the value/uncertainty invariants.
    PredictionGrid(LatticeSpec spec, std::vector<Cell> cells);

    const LatticeSpec& spec() const { return spec_; }
    std::span<const Cell> cells() const { return cells_; }
    const Cell& at(std::int64_t i, std::int64_t j) const { return cells_[spec_.index(i, j)]; }

    std::size_t count(CellKind kind) const;

    friend bool operator==(const PredictionGrid&, const PredictionGrid&) = default;

private:
    LatticeSpec spec_;
    std::vector<Cell> cells_;
};

/// Raw ingestion record. An absent value or uncertainty marks the cell Missing.
struct Record {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> value;
    std::optional<double> uncertainty;
};

/// Relative tolerance (in units of cell spacing) for coordinate alignment.
inline constexpr double kAlignmentTolerance = 1e-6;

/// Largest lattice accepted by build_grid, in cells.
inline constexpr std::int64_t kMaxCells = std::int64_t{1} << 31;

Cell classify_cell(double value, double uncertainty, double zero_tol);

/// Width of a credible interval; throws InvertedInterval when lo > hi.
double derive_uncertainty(double lo, double hi);

/// Infers the lattice from the records' coordinates and fills it. Lattice
/// positions without a record become Missing.
PredictionGrid build_grid(std::span<const Record> records, double zero_tol = 0.0);

/// One record per cell in row-major order; Missing cells have no value.
std::vector<Record> to_records(const PredictionGrid& grid);

}  // namespace pixelate
