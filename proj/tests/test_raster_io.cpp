#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "pixelate/error.hpp"
#include "pixelate/pipeline.hpp"
#include "pixelate/raster_io.hpp"
#include "support.hpp"

using namespace pixelate;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

PredictionGrid csv(const std::string& text, CsvMode* mode = nullptr) {
    std::istringstream in(text);
    return parse_csv(in, 0.0, mode);
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "pixelate_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("read_csv point-uncertainty mode") {
    CsvMode mode{};
    const auto g = csv("x,y,z,u\n0,0,1,0.5\n1,0,2,0.5\n0,1,3,0.5\n1,1,4,0.5\n", &mode);
    CHECK(mode == CsvMode::PointUncertainty);
    CHECK(g.spec().n_x == 2);
    CHECK(g.spec().n_y == 2);
    CHECK(g.count(CellKind::Observed) == 4);
}

TEST_CASE("read_csv interval mode, NA and blanks") {
    CsvMode mode{};
    const auto g = csv("x,y,z,z_lo,z_hi\r\n0,0,1,0.5,1.5\r\n1,0,NA,0,1\r\n0,1,0,0,0\r\n1,1,2,,3\r\n\r\n", &mode);
    CHECK(mode == CsvMode::Interval);
    CHECK(g.at(0, 0) == Cell::observed(1.0, 1.0));
    CHECK(g.at(1, 0).kind == CellKind::Missing);
    CHECK(g.at(0, 1).kind == CellKind::CertainZero);
    CHECK(g.at(1, 1).kind == CellKind::Missing);
}

TEST_CASE("read_csv errors carry line context") {
    CHECK(code_of([] { csv("x,y,value\n0,0,1\n"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] { csv("x,y,z,u\n0,0,1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { csv("x,y,z,u\n0,zero,1,1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { csv("x,y,z,u\n0,0,1,-1\n"); }) == ErrorCode::NegativeUncertainty);
    CHECK(code_of([] { csv("x,y,z,u\n0,0,1,1\n0.5,0,1,1\n1.3,0,1,1\n"); }) == ErrorCode::IrregularLattice);
    CHECK(code_of([] { read_csv("/nonexistent/file.csv"); }) == ErrorCode::IoError);

    try {
        csv("x,y,z,z_lo,z_hi\n0,0,1,0,1\n1,0,1,0.4,0.1\n");
        FAIL("expected InvertedInterval");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvertedInterval);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        csv("x,y,z,u\n0,0,1,1\n1,0,1,1\n0,0,2,2\n");
        FAIL("expected DuplicateCoordinate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicateCoordinate);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("grid CSV round-trip is exact") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = testing::random_grid(rng, {3 + static_cast<std::int64_t>(rng() % 20), 3 + static_cast<std::int64_t>(rng() % 20), 0.3});
        CHECK(csv(format_grid_csv(g)) == g);
    }
    // non-unit lattice with a fractional origin
    LatticeSpec spec{-3.25, 41.1, 0.083333333333333329, 0.1, 7, 5};
    std::vector<Cell> cells(spec.cell_count(), Cell::observed(0.1, 0.2));
    cells[3] = Cell::missing();
    const PredictionGrid g(spec, cells);
    const auto back = csv(format_grid_csv(g));
    CHECK(back.cells().size() == g.cells().size());
    CHECK(std::equal(back.cells().begin(), back.cells().end(), g.cells().begin()));
    CHECK(back.spec().n_x == 7);
    CHECK(back.spec().cell_w == doctest::Approx(spec.cell_w).epsilon(1e-12));
}

TEST_CASE("ASCII grid pair") {
    const std::string header = "ncols 2\nnrows 2\nxllcorner 10\nyllcorner 20\ncellsize 2\nNODATA_value -9999\n";
    SUBCASE("all data, top row first") {
        std::istringstream z(header + "1 2\n3 4\n"), u(header + "0.1 0.2\n0.3 0.4\n");
        const auto g = parse_ascii_grid_pair(z, u);
        CHECK(g.spec().origin_x == 11.0);
        CHECK(g.spec().origin_y == 21.0);
        CHECK(g.spec().cell_w == 2.0);
        CHECK(g.at(0, 1) == Cell::observed(1, 0.1));  // top-left
        CHECK(g.at(1, 0) == Cell::observed(4, 0.4));  // bottom-right
    }
    SUBCASE("NODATA in one layer") {
        std::istringstream z(header + "-9999 2\n3 4\n"), u(header + "0.1 0.2\n0.3 0.4\n");
        const auto g = parse_ascii_grid_pair(z, u);
        CHECK(g.at(0, 1).kind == CellKind::Missing);
        CHECK(g.count(CellKind::Missing) == 1);
    }
    SUBCASE("header mismatch") {
        std::istringstream z(header + "1 2\n3 4\n");
        std::istringstream u("ncols 3\nnrows 2\nxllcorner 10\nyllcorner 20\ncellsize 2\nNODATA_value -9999\n1 2 3\n4 5 6\n");
        CHECK(code_of([&] { parse_ascii_grid_pair(z, u); }) == ErrorCode::HeaderMismatch);
    }
    SUBCASE("short data") {
        std::istringstream z(header + "1 2\n3\n"), u(header + "0.1 0.2\n0.3 0.4\n");
        CHECK(code_of([&] { parse_ascii_grid_pair(z, u); }) == ErrorCode::ParseError);
    }
}

TEST_CASE("pixelated CSV format") {
    const auto grid = testing::worked_example_grid();
    PixelationParams p;
    p.num_sizes = 2;
    p.min_big = {2, 2};
    const auto r = run_pipeline(grid, p);
    const auto text = format_pixelated_csv(r.pixelated);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,state,z_display,size_class,pixel_id,pixel_u_mean");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 16);
    CHECK(rows[0] == "0,0,obs,0,1,0,0.10000000000000001");
    // cell (2,0): big pixel 1, block 0
    CHECK(rows[2] == "2,0,obs,4.5,2,4294967296,0.90000000000000002");
    CHECK(rows[15].rfind("3,3,obs,12.5,2,", 0) == 0);

    const PredictionGrid missing({0, 0, 1, 1, 4, 4}, std::vector<Cell>(16, Cell::missing()));
    const auto rm = run_pipeline(missing, p);
    const auto mtext = format_pixelated_csv(rm.pixelated);
    CHECK(mtext.find("0,0,missing,,,,\n") != std::string::npos);
    CHECK(std::count(mtext.begin(), mtext.end(), '\n') == 17);
    CHECK(format_pixelated_csv(rm.pixelated) == mtext);
}

TEST_CASE("summary formats and IoError") {
    const auto grid = testing::worked_example_grid(5.0);
    PixelationParams p;
    p.num_sizes = 2;
    p.min_big = {2, 2};
    const auto r = run_pipeline(grid, p);
    const auto text = format_summary(r.summary, TableFormat::Csv);
    CHECK(text ==
          "size_class,side_cells,side_w,side_h,big_pixel_count,u_lower,u_upper,cells_per_full_pixel\n"
          "1,1,5,5,2,-inf,0.5,1\n"
          "2,2,10,10,2,0.5,inf,4\n");
    const auto md = format_summary(r.summary, TableFormat::Markdown);
    CHECK(md.rfind("| size class |", 0) == 0);
    CHECK(md.find("| 2 | 2 | 10 x 10 | 2 | (0.5, +inf) | 4 |") != std::string::npos);

    const auto path = scratch("summary.csv");
    write_summary(r.summary, path, TableFormat::Csv);
    CHECK(read_file(path) == text);
    CHECK(code_of([&] { write_summary(r.summary, "/nonexistent-dir/x.csv", TableFormat::Csv); }) == ErrorCode::IoError);
}

TEST_CASE("allocation table") {
    const auto grid = testing::worked_example_grid();
    PixelationParams p;
    p.num_sizes = 2;
    p.min_big = {2, 2};
    const auto r = run_pipeline(grid, p);
    CHECK(format_allocation_csv(r.partition, r.alloc) ==
          "big_i,big_j,i0,i1,j0,j1,included_count,avg_u,interval\n"
          "0,0,0,2,0,2,4,0.10000000000000001,1\n"
          "1,0,2,4,0,2,4,0.90000000000000002,2\n"
          "0,1,0,2,2,4,4,0.10000000000000001,1\n"
          "1,1,2,4,2,4,4,0.90000000000000002,2\n");
}
