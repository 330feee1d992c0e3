#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>
#include <tuple>

#include "cli.hpp"
#include "pixelate/manifest.hpp"
#include "pixelate/raster_io.hpp"
#include "pixelate/render.hpp"

using namespace pixelate;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path workdir() {
    const auto dir = fs::temp_directory_path() / "pixelate_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string p(const std::string& name) { return (workdir() / name).string(); }

std::size_t distinct_colors(const std::string& png_path) {
    const auto bytes = read_file(png_path);
    const auto img = decode_png(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
    std::set<std::tuple<int, int, int>> seen;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const auto c = img.at(x, y);
            seen.insert({c.r, c.g, c.b});
        }
    return seen.size();
}

}  // namespace

TEST_CASE("synth writes byte-identical CSVs") {
    REQUIRE(run({"synth", "--bundled", "demo_small", "--out", p("a.csv")}).code == 0);
    REQUIRE(run({"synth", "--bundled", "demo_small", "--out", p("b.csv")}).code == 0);
    CHECK(read_file(p("a.csv")) == read_file(p("b.csv")));
    CHECK(read_file(p("a.csv")).rfind("x,y,z,u\n", 0) == 0);
}

TEST_CASE("synth flag errors exit 2") {
    const auto r = run({"synth", "--bundled", "demo_small"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--out") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({"synth", "--bundled", "nope", "--out", p("x.csv")}).code == 2);
}

TEST_CASE("zero sites triggers the constant-uncertainty warning") {
    REQUIRE(run({"synth", "--sites", "0", "--out", p("flat.csv")}).code == 0);
    const auto r = run({"pixelate", "--input", p("flat.csv"), "--min-big", "2,2", "--out-prefix", p("flat")});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning: all big pixels share the same average uncertainty") != std::string::npos);
}

TEST_CASE("pixelate writes every artifact and a manifest") {
    REQUIRE(run({"synth", "--bundled", "demo_small", "--out", p("small.csv")}).code == 0);
    const auto r = run({"pixelate", "--input", p("small.csv"), "--min-big", "2,2", "--out-prefix", p("s1"), "--svg"});
    REQUIRE(r.code == 0);
    for (const char* suffix : {".pixelated.csv", ".map.png", ".alloc.png", ".alloc.csv", ".summary.csv",
                               ".map.svg", ".manifest.txt"}) {
        CHECK(fs::exists(p(std::string("s1") + suffix)));
    }
    const auto m = parse_manifest(read_file(p("s1.manifest.txt")));
    CHECK(m.params.num_sizes == 6);
    CHECK(m.params.min_big.x == 2);
    CHECK(m.ladder == "1,2,4,8,16,32");
    CHECK(m.big_pixels == "2x2");
    CHECK(m.uncertainty_mode == "u");
    CHECK(m.input_digest == sha256_digest(read_file(p("small.csv"))));
    CHECK(m.outputs.at(".map.png") == sha256_digest(read_file(p("s1.map.png"))));
}

TEST_CASE("manifest re-run reproduces outputs byte for byte") {
    REQUIRE(run({"synth", "--bundled", "demo_small", "--out", p("small.csv")}).code == 0);
    REQUIRE(run({"pixelate", "--input", p("small.csv"), "--min-big", "2,2", "--num-sizes", "3", "--scale",
                 "iexpn", "--out-prefix", p("m1")})
                .code == 0);
    REQUIRE(run({"pixelate", "--manifest", p("m1.manifest.txt"), "--out-prefix", p("m2")}).code == 0);
    for (const char* suffix : {".pixelated.csv", ".map.png", ".alloc.png", ".alloc.csv", ".summary.csv"}) {
        CHECK(read_file(p(std::string("m1") + suffix)) == read_file(p(std::string("m2") + suffix)));
    }
    const auto a = parse_manifest(read_file(p("m1.manifest.txt")));
    const auto b = parse_manifest(read_file(p("m2.manifest.txt")));
    CHECK(a.outputs == b.outputs);
    CHECK(b.params.mode == ScaleMode::iexpn);

    SUBCASE("a changed input is refused") {
        write_file(p("m_changed.manifest.txt"),
                   format_manifest([&] {
                       auto m = a;
                       m.input_digest = sha256_digest(std::string("something else"));
                       return m;
                   }()));
        CHECK(run({"pixelate", "--manifest", p("m_changed.manifest.txt"), "--out-prefix", p("m3")}).code == 2);
    }
}

TEST_CASE("GridTooSmall exits 2 and names the feasible size") {
    REQUIRE(run({"synth", "--nx", "100", "--ny", "100", "--out", p("g100.csv")}).code == 0);
    const auto r = run({"pixelate", "--input", p("g100.csv"), "--min-big", "20,20", "--out-prefix", p("g")});
    CHECK(r.code == 2);
    CHECK(r.err.find("GridTooSmall") != std::string::npos);
    CHECK(r.err.find("largest feasible s_K = 5") != std::string::npos);
}

TEST_CASE("num-sizes 1 reproduces the unpixelated map") {
    REQUIRE(run({"synth", "--bundled", "demo_small", "--out", p("small.csv")}).code == 0);
    REQUIRE(run({"pixelate", "--input", p("small.csv"), "--num-sizes", "1", "--out-prefix", p("k1")}).code == 0);
    const auto text = read_file(p("k1.pixelated.csv"));
    const auto grid = read_csv(p("small.csv"));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::size_t c = 0;
    while (std::getline(in, line)) {
        const Cell& cell = grid.cells()[c++];
        if (!cell.is_observed()) continue;
        std::istringstream row(line);
        std::string field;
        for (int k = 0; k < 4; ++k) std::getline(row, field, ',');
        CHECK(field == format_number(cell.value));
    }
    CHECK(c == grid.cells().size());
}

TEST_CASE("allocate and summarize") {
    REQUIRE(run({"synth", "--bundled", "demo_small", "--out", p("small.csv")}).code == 0);
    REQUIRE(run({"allocate", "--input", p("small.csv"), "--min-big", "2,2", "--out-prefix", p("al")}).code == 0);
    CHECK(fs::exists(p("al.alloc.png")));
    CHECK_FALSE(fs::exists(p("al.map.png")));
    CHECK(distinct_colors(p("al.alloc.png")) <= 6 + 1);

    const auto s = run({"summarize", "--input", p("small.csv"), "--min-big", "2,2"});
    REQUIRE(s.code == 0);
    CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 1 + 6);

    const auto md = run({"summarize", "--input", p("small.csv"), "--min-big", "2,2", "--format", "markdown"});
    CHECK(md.out.rfind("| size class", 0) == 0);

    CHECK(run({"summarize", "--input", p("does-not-exist.csv")}).code == 1);
    CHECK(run({"allocate", "--input", p("does-not-exist.csv"), "--out-prefix", p("z")}).code == 1);
}

TEST_CASE("ASCII grid input") {
    const std::string header = "ncols 4\nnrows 4\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n";
    write_file(p("z.asc"), header + "12 13 14 15\n8 9 10 11\n4 5 6 7\n0 1 2 3\n");
    write_file(p("u.asc"), header + "0.1 0.1 0.9 0.9\n0.1 0.1 0.9 0.9\n0.1 0.1 0.9 0.9\n0.1 0.1 0.9 0.9\n");
    const auto r = run({"summarize", "--input-z", p("z.asc"), "--input-u", p("u.asc"), "--num-sizes", "2",
                        "--min-big", "2,2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("1,1,1,1,2,-inf,0.5,1") != std::string::npos);
}

TEST_CASE("argument validation") {
    CHECK(run({}).code == 2);
    CHECK(run({"pixelate", "--out-prefix", p("n")}).code == 2);  // no input
    CHECK(run({"pixelate", "--input", p("small.csv"), "--scale", "bogus", "--out-prefix", p("n")}).code == 2);
    CHECK(run({"pixelate", "--input", p("small.csv"), "--min-big", "a,b", "--out-prefix", p("n")}).code == 2);
    CHECK(run({"--help"}).code == 0);
}
