#include <doctest.h>

#include <random>
#include <string>

#include "pixelate/error.hpp"
#include "pixelate/ladder.hpp"
#include "support.hpp"

using namespace pixelate;

using Sizes = std::vector<std::int64_t>;

TEST_CASE("build_ladder recurrences") {
    CHECK(build_ladder(6, ScaleMode::imult, 1).sizes == Sizes{1, 2, 4, 8, 16, 32});
    CHECK(build_ladder(1, ScaleMode::imult, 1).sizes == Sizes{1});
    CHECK(build_ladder(4, ScaleMode::iexpn, 1).sizes == Sizes{1, 2, 8, 64});
    CHECK(build_ladder(3, ScaleMode::imult, 2).sizes == Sizes{1, 3, 9});
    CHECK(build_ladder(3, ScaleMode::iexpn, 2).sizes == Sizes{1, 3, 27});
}

TEST_CASE("build_ladder overflow and bad arguments") {
    CHECK_THROWS_AS(build_ladder(40, ScaleMode::imult, 1), Error);
    try {
        build_ladder(40, ScaleMode::imult, 1);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LadderOverflow);
    }
    CHECK(build_ladder(32, ScaleMode::imult, 1).largest() == std::int64_t{1} << 31);
    CHECK_THROWS_AS(build_ladder(0, ScaleMode::imult, 1), Error);
    CHECK_THROWS_AS(build_ladder(3, ScaleMode::imult, 0), Error);
}

TEST_CASE("ladder divisibility and growth") {
    for (auto mode : {ScaleMode::imult, ScaleMode::iexpn}) {
        for (int c = 1; c <= 3; ++c) {
            for (int k = 1; k <= 6; ++k) {
                std::optional<SizeLadder> ladder;
                try {
                    ladder = build_ladder(k, mode, c);
                } catch (const Error&) {
                    continue;
                }
                CHECK(ladder->sizes.front() == 1);
                for (std::size_t s = 0; s < ladder->sizes.size(); ++s) {
                    CHECK(ladder->largest() % ladder->sizes[s] == 0);
                    if (s > 0) {
                        CHECK(ladder->sizes[s] > ladder->sizes[s - 1]);
                        CHECK(ladder->sizes[s] % ladder->sizes[s - 1] == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("partition_grid geometry") {
    const auto ladder = build_ladder(6, ScaleMode::imult, 1);

    SUBCASE("512 x 512 gives 16 x 16 full big pixels") {
        const auto p = partition_grid({0, 0, 1, 1, 512, 512}, ladder, {12, 12});
        CHECK(p.n_big_x == 16);
        CHECK(p.n_big_y == 16);
        for (const auto& bp : p.pixels) CHECK(bp.range.area() == 32 * 32);
    }
    SUBCASE("70 x 64 has a partial third column") {
        const auto p = partition_grid({0, 0, 1, 1, 70, 64}, ladder, {2, 2});
        CHECK(p.n_big_x == 3);
        CHECK(p.n_big_y == 2);
        CHECK(p.at(2, 0).range.width() == 6);
        CHECK(p.at(2, 1).range.height() == 32);
        CHECK(p.at(1, 1).range == CellRange{32, 64, 32, 64});
    }
    SUBCASE("100 x 100 with lower bound 12 is too small") {
        try {
            partition_grid({0, 0, 1, 1, 100, 100}, ladder, {12, 12});
            FAIL("expected GridTooSmall");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::GridTooSmall);
            CHECK(std::string(e.what()).find("largest feasible s_K = 8") != std::string::npos);
            CHECK(std::string(e.what()).find("largest feasible num_sizes = 4") != std::string::npos);
        }
    }
}

TEST_CASE("largest_feasible_num_sizes") {
    CHECK(largest_feasible_num_sizes(ScaleMode::imult, 1, 8) == 4);
    CHECK(largest_feasible_num_sizes(ScaleMode::imult, 1, 5) == 3);
    CHECK(largest_feasible_num_sizes(ScaleMode::iexpn, 1, 63) == 3);
    CHECK(largest_feasible_num_sizes(ScaleMode::iexpn, 1, 64) == 4);
    CHECK(largest_feasible_num_sizes(ScaleMode::imult, 1, 0) == 0);
}

TEST_CASE("tiling is an exact partition of the lattice") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t nx = 1 + static_cast<std::int64_t>(rng() % 100);
        const std::int64_t ny = 1 + static_cast<std::int64_t>(rng() % 100);
        const auto ladder = build_ladder(1 + static_cast<int>(rng() % 4),
                                         rng() % 2 ? ScaleMode::imult : ScaleMode::iexpn,
                                         1 + static_cast<int>(rng() % 2));
        const auto p = partition_grid({0, 0, 1, 1, nx, ny}, ladder, {1, 1});
        std::vector<int> hits(static_cast<std::size_t>(nx * ny), 0);
        std::int64_t total = 0;
        for (const auto& bp : p.pixels) {
            total += bp.range.area();
            for (auto j = bp.range.j0; j < bp.range.j1; ++j)
                for (auto i = bp.range.i0; i < bp.range.i1; ++i) ++hits[static_cast<std::size_t>(j * nx + i)];
        }
        CHECK(total == nx * ny);
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
}

TEST_CASE("big_pixel_stats") {
    const auto ladder = build_ladder(2, ScaleMode::imult, 1);  // [1, 2]
    const LatticeSpec spec{0, 0, 1, 1, 2, 2};

    SUBCASE("mean of observed uncertainties") {
        const PredictionGrid g(spec, {Cell::observed(1, 0.1), Cell::observed(1, 0.1), Cell::observed(1, 0.3),
                                      Cell::observed(1, 0.5)});
        const auto p = big_pixel_stats(g, partition_grid(spec, ladder, {1, 1}));
        CHECK(p.pixels[0].included_count == 4);
        CHECK(*p.pixels[0].avg_uncertainty == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("all missing") {
        const PredictionGrid g(spec, std::vector<Cell>(4, Cell::missing()));
        const auto p = big_pixel_stats(g, partition_grid(spec, ladder, {1, 1}));
        CHECK(p.pixels[0].included_count == 0);
        CHECK_FALSE(p.pixels[0].avg_uncertainty.has_value());
    }
    SUBCASE("masked cells are excluded") {
        const PredictionGrid g(spec, {Cell::observed(1, 0.2), Cell::missing(), Cell::certain_zero(0, 0),
                                      Cell::observed(3, 0.4)});
        const auto p = big_pixel_stats(g, partition_grid(spec, ladder, {1, 1}));
        CHECK(p.pixels[0].included_count == 2);
        CHECK(*p.pixels[0].avg_uncertainty == doctest::Approx(0.3).epsilon(1e-15));
    }
    SUBCASE("recomputation is bit-equal") {
        std::mt19937_64 rng(9);
        const auto g = testing::random_grid(rng, {40, 33, 0.2});
        const auto l3 = build_ladder(3, ScaleMode::imult, 1);
        const auto geom = partition_grid(g.spec(), l3, {1, 1});
        const auto a = big_pixel_stats(g, geom);
        const auto b = big_pixel_stats(g, geom);
        for (std::size_t k = 0; k < a.pixels.size(); ++k) {
            CHECK(a.pixels[k].included_count == b.pixels[k].included_count);
            CHECK(std::bit_cast<std::uint64_t>(a.pixels[k].avg_uncertainty.value_or(-1)) ==
                  std::bit_cast<std::uint64_t>(b.pixels[k].avg_uncertainty.value_or(-1)));
        }
    }
    SUBCASE("geometry mismatch") {
        const PredictionGrid g(spec, std::vector<Cell>(4, Cell::missing()));
        CHECK_THROWS_AS(big_pixel_stats(g, partition_grid({0, 0, 1, 1, 3, 3}, ladder, {1, 1})), Error);
    }
}
