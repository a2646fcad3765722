#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "fracmem/grid.hpp"
#include "fracmem/rng.hpp"
#include "fracmem/synth.hpp"

using namespace fracmem;

TEST_CASE("make_grid produces the advertised cell centers") {
    const Grid g = make_grid(1, {-1.0, 0.0}, 0.5, {4, 1});
    CHECK(g.cell_count() == 4);
    const double expected[4] = {-0.75, -0.25, 0.25, 0.75};
    for (int i = 0; i < 4; ++i)
        CHECK(g.center(g.coord_of(i))[0] == doctest::Approx(expected[i]).epsilon(1e-15));

    const Grid g2 = make_grid(2, {0.0, 0.0}, 1.0, {2, 2});
    CHECK(g2.cell_count() == 4);
    CHECK(g2.cell_volume() == 1.0);

    CHECK_THROWS_AS(make_grid(1, {0.0, 0.0}, 0.1, {0, 1}), ParameterError);
    CHECK_THROWS_AS(make_grid(3, {0.0, 0.0}, 0.1, {4, 4}), ParameterError);
    CHECK_THROWS_AS(make_grid(1, {0.0, 0.0}, -0.1, {4, 1}), ParameterError);
}

TEST_CASE("mask_from_shape: balls, rects, and degenerate inputs") {
    const Grid g = make_grid(1, {-1.0, 0.0}, 0.5, {4, 1});
    const Mask ball = mask_from_shape(g, ball_spec({0.0, 0.0}, 0.5));
    REQUIRE(ball.count() == 2);
    CHECK(ball.grid.center(ball.grid.coord_of(ball.cells[0]))[0] == doctest::Approx(-0.25));
    CHECK(ball.grid.center(ball.grid.coord_of(ball.cells[1]))[0] == doctest::Approx(0.25));
    CHECK(measure(ball) == doctest::Approx(1.0).epsilon(1e-15));

    const Grid g2 = make_grid(2, {0.0, 0.0}, 1.0, {3, 3});
    const Mask rect = mask_from_shape(g2, rect_spec({0.0, 0.0}, {2.0, 1.0}));
    CHECK(rect.count() == 2);

    CHECK_THROWS_AS(mask_from_shape(g, ball_spec({0.0, 0.0}, 0.0)), ParameterError);
    CHECK_THROWS_AS(mask_from_shape(g, ball_spec({50.0, 0.0}, 0.4)), ParameterError);
}

TEST_CASE("measure is exact cell counting") {
    const Grid g2 = make_grid(2, {0.0, 0.0}, 0.25, {6, 6});
    std::vector<int> cells;
    for (int i = 0; i < 12; ++i) cells.push_back(i);
    CHECK(measure(mask_from_cells(g2, cells)) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(measure(Mask{g2, {}}) == 0.0);
    const Grid g1 = make_grid(1, {0.0, 0.0}, 0.5, {4, 1});
    CHECK(measure(mask_from_shape(g1, rect_spec({-1.0, 0.0}, {9.0, 0.0}))) == doctest::Approx(2.0));
}

TEST_CASE("intersect_translate basics") {
    const Grid g = make_grid(1, {0.0, 0.0}, 0.25, {8, 1});
    const Mask a = mask_from_shape(g, rect_spec({0.0, 0.0}, {1.0, 0.0}));
    REQUIRE(a.count() == 4);

    const Mask self = intersect_translate(a, a, {0, 0});
    CHECK(self.cells == a.cells);

    const Mask shifted = intersect_translate(a, a, {2, 0});
    CHECK(measure(shifted) == doctest::Approx(0.5).epsilon(1e-15));

    const Mask b = mask_from_cells(g, {6, 7});
    CHECK(intersect_translate(a, b, {0, 0}).empty());

    const Grid incompatible = make_grid(1, {0.1, 0.0}, 0.25, {8, 1});
    const Mask c = mask_from_cells(incompatible, {0, 1});
    CHECK_THROWS_AS(intersect_translate(a, c, {0, 0}), ParameterError);
    const Grid other_h = make_grid(1, {0.0, 0.0}, 0.5, {8, 1});
    CHECK_THROWS_AS(intersect_translate(a, mask_from_cells(other_h, {0}), {0, 0}),
                    ParameterError);
}

TEST_CASE("overlap_volume_map: identity, triangle profile, discrete Fubini") {
    const Grid g = make_grid(1, {0.0, 0.0}, 1.0, {8, 1});
    const Mask a = mask_from_cells(g, {2, 3});
    const Mask b = mask_from_cells(g, {2, 3});

    const auto omap = overlap_volume_map(a, b);
    CHECK(omap.at({0, 0}) == doctest::Approx(2.0));
    // two 2-cell intervals: triangle profile 1,2,1
    CHECK(omap.size() == 3);
    CHECK(omap.at({-1, 0}) == doctest::Approx(1.0));
    CHECK(omap.at({1, 0}) == doctest::Approx(1.0));

    // unit-measure masks at shift zero
    const Grid gu = make_grid(1, {0.0, 0.0}, 0.5, {8, 1});
    const Mask u1 = mask_from_cells(gu, {1, 2});
    CHECK(overlap_volume_map(u1, u1).at({0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("overlap map invariants on random masks") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const int dim = seed % 2 == 0 ? 1 : 2;
        const Mask a = random_connected_mask(dim, 100 + seed, 3, 12, 0.5);
        const Mask b = random_connected_mask(dim, 200 + seed, 3, 12, 0.5);
        // the generator uses one canonical grid per dim, so frames are compatible
        const auto ab = overlap_volume_map(a, b);
        const auto ba = overlap_volume_map(b, a);
        const double vol = a.grid.cell_volume();

        long long total = 0;
        for (const auto& [k, v] : ab) {
            CHECK(v <= std::min(measure(a), measure(b)) + 1e-12);
            const Coord neg{-k[0], -k[1]};
            REQUIRE(ba.count(neg) == 1);
            CHECK(ba.at(neg) == doctest::Approx(v).epsilon(1e-15));
            CHECK(measure(intersect_translate(a, b, k)) == doctest::Approx(v).epsilon(1e-15));
            total += std::llround(v / vol);
        }
        // sum_k count(k) == count(a) * count(b), exactly
        CHECK(total == static_cast<long long>(a.count()) * b.count());
    }
}

TEST_CASE("blob masks are deterministic, connected, nonempty") {
    const Grid g = make_grid(2, {0.0, 0.0}, 1.0 / 16, {32, 32});
    const Mask m1 = mask_from_shape(g, blob_spec(7, 0.45));
    const Mask m2 = mask_from_shape(g, blob_spec(7, 0.45));
    CHECK(m1.cells == m2.cells);
    CHECK(m1.count() > 10);

    // connectivity: flood from the first cell reaches every cell
    std::vector<int> stack{m1.cells[0]};
    std::vector<std::uint8_t> seen(g.cell_count(), 0);
    seen[m1.cells[0]] = 1;
    int reached = 0;
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        ++reached;
        const Coord c = g.coord_of(cur);
        for (const Coord nb : {Coord{c[0] - 1, c[1]}, Coord{c[0] + 1, c[1]},
                               Coord{c[0], c[1] - 1}, Coord{c[0], c[1] + 1}}) {
            if (!g.in_range(nb)) continue;
            const int idx = g.index_of(nb);
            if (!seen[idx] && m1.contains(idx)) {
                seen[idx] = 1;
                stack.push_back(idx);
            }
        }
    }
    CHECK(reached == m1.count());
}
