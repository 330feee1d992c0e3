#include "pixelate/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "pixelate/error.hpp"

namespace pixelate {

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

struct Axis {
    double origin = 0.0;
    double spacing = 1.0;
    std::int64_t count = 1;
};

// Spacing is the smallest positive gap between distinct coordinates; a
// single distinct coordinate gives a degenerate axis of spacing 1.
Axis infer_axis(std::vector<double> coords) {
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

    Axis axis;
    axis.origin = coords.front();
    if (coords.size() == 1) return axis;

    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < coords.size(); ++k) {
        gap = std::min(gap, coords[k] - coords[k - 1]);
    }
    axis.spacing = gap;
    const double span = (coords.back() - coords.front()) / gap;
    if (span + 1.0 > static_cast<double>(kMaxCells)) {
        throw Error(ErrorCode::IrregularLattice,
                    "coordinate range implies more than 2^31 cells along one axis");
    }
    axis.count = std::llround(span) + 1;
    return axis;
}

std::int64_t align(double coord, const Axis& axis, std::size_t record, char name) {
    const auto k = std::llround((coord - axis.origin) / axis.spacing);
    const double snapped = axis.origin + static_cast<double>(k) * axis.spacing;
    if (std::abs(coord - snapped) > kAlignmentTolerance * axis.spacing || k < 0 ||
        k >= axis.count) {
        throw Error(ErrorCode::IrregularLattice,
                    std::string(1, name) + " = " + std::to_string(coord) +
                        " is not on the lattice (spacing " + std::to_string(axis.spacing) + ")",
                    record);
    }
    return k;
}

}  // namespace

Cell Cell::missing() {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {CellKind::Missing, nan, nan};
}

bool operator==(const Cell& a, const Cell& b) {
    return a.kind == b.kind && same_bits(a.value, b.value) &&
           same_bits(a.uncertainty, b.uncertainty);
}

PredictionGrid::PredictionGrid(LatticeSpec spec, std::vector<Cell> cells)
    : spec_(spec), cells_(std::move(cells)) {
    if (!(spec_.cell_w > 0.0) || !(spec_.cell_h > 0.0) || spec_.n_x < 1 || spec_.n_y < 1) {
        throw Error(ErrorCode::InconsistentInputs, "lattice needs positive spacing and counts");
    }
    if (cells_.size() != spec_.cell_count()) {
        throw Error(ErrorCode::InconsistentInputs,
                    "cell count " + std::to_string(cells_.size()) + " does not match lattice " +
                        std::to_string(spec_.n_x) + "x" + std::to_string(spec_.n_y));
    }
    for (const auto& c : cells_) {
        if (c.kind == CellKind::Observed &&
            (!std::isfinite(c.value) || !std::isfinite(c.uncertainty) || c.uncertainty < 0.0)) {
            throw Error(ErrorCode::InconsistentInputs, "observed cell violates invariants");
        }
    }
}

std::size_t PredictionGrid::count(CellKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        cells_.begin(), cells_.end(), [kind](const Cell& c) { return c.kind == kind; }));
}

Cell classify_cell(double value, double uncertainty, double zero_tol) {
    if (std::abs(value) <= zero_tol && uncertainty <= zero_tol) {
        return Cell::certain_zero(value, uncertainty);
    }
    return Cell::observed(value, uncertainty);
}

double derive_uncertainty(double lo, double hi) {
    if (lo > hi) {
        throw Error(ErrorCode::InvertedInterval,
                    "lower bound " + std::to_string(lo) + " exceeds upper bound " +
                        std::to_string(hi));
    }
    return hi - lo;
}

PredictionGrid build_grid(std::span<const Record> records, double zero_tol) {
    if (records.empty()) {
        throw Error(ErrorCode::InconsistentInputs, "no records");
    }
    if (!(zero_tol >= 0.0)) {
        throw Error(ErrorCode::InconsistentInputs, "zero tolerance must be >= 0");
    }

    std::vector<double> xs, ys;
    xs.reserve(records.size());
    ys.reserve(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (!std::isfinite(rec.x) || !std::isfinite(rec.y)) {
            throw Error(ErrorCode::NonFiniteValue, "non-finite coordinate", r);
        }
        if (rec.value && !std::isfinite(*rec.value)) {
            throw Error(ErrorCode::NonFiniteValue, "non-finite value", r);
        }
        if (rec.uncertainty) {
            if (!std::isfinite(*rec.uncertainty)) {
                throw Error(ErrorCode::NonFiniteValue, "non-finite uncertainty", r);
            }
            if (*rec.uncertainty < 0.0) {
                throw Error(ErrorCode::NegativeUncertainty,
                            "uncertainty " + std::to_string(*rec.uncertainty) + " < 0", r);
            }
        }
        xs.push_back(rec.x);
        ys.push_back(rec.y);
    }

    const Axis ax = infer_axis(std::move(xs));
    const Axis ay = infer_axis(std::move(ys));
    if (ax.count * ay.count > kMaxCells) {
        throw Error(ErrorCode::IrregularLattice, "implied lattice exceeds 2^31 cells");
    }

    LatticeSpec spec{ax.origin, ay.origin, ax.spacing, ay.spacing, ax.count, ay.count};
    std::vector<Cell> cells(spec.cell_count(), Cell::missing());
    std::vector<bool> seen(spec.cell_count(), false);

    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        const auto i = align(rec.x, ax, r, 'x');
        const auto j = align(rec.y, ay, r, 'y');
        const auto idx = spec.index(i, j);
        if (seen[idx]) {
            throw Error(ErrorCode::DuplicateCoordinate,
                        "cell (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") appears more than once",
                        r);
        }
        seen[idx] = true;
        if (rec.value && rec.uncertainty) {
            cells[idx] = classify_cell(*rec.value, *rec.uncertainty, zero_tol);
        }
    }
    return PredictionGrid(spec, std::move(cells));
}

std::vector<Record> to_records(const PredictionGrid& grid) {
    const auto& spec = grid.spec();
    std::vector<Record> out;
    out.reserve(spec.cell_count());
    for (std::int64_t j = 0; j < spec.n_y; ++j) {
        for (std::int64_t i = 0; i < spec.n_x; ++i) {
            const Cell& c = grid.at(i, j);
            Record rec{spec.center_x(i), spec.center_y(j), std::nullopt, std::nullopt};
            if (c.kind != CellKind::Missing) {
                rec.value = c.value;
                rec.uncertainty = c.uncertainty;
            }
            out.push_back(rec);
        }
    }
    return out;
}

}  // namespace pixelate
