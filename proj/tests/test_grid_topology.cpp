#include <catch2/catch_amalgamated.hpp>

#include "toruslab/grid_set.hpp"
#include "toruslab/rng.hpp"

using namespace toruslab;

namespace {

GridOpenSet rows_set(int n, std::initializer_list<int> rows) {
    GridOpenSet s(n);
    for (int j : rows)
        for (int i = 0; i < n; ++i) s.insert(i, j);
    return s;
}

} // namespace

TEST_CASE("exterior is idempotent after one regularization, on random sets") {
    Rng rng(101);
    for (int n : {8, 16, 32}) {
        for (int trial = 0; trial < 120; ++trial) {
            Rng local = rng.split((std::uint64_t)n * 1000 + trial);
            const GridOpenSet s = GridOpenSet::random(n, local, 0.3 + 0.4 * local.next_double());
            const GridOpenSet p1 = perp(s);
            const GridOpenSet p3 = perp(perp(p1));
            CHECK(p3 == p1);
            const GridOpenSet reg = regularize(s);
            CHECK(regularize(reg) == reg);
            CHECK(is_regular(reg));
            CHECK(s.subset_of(reg)); // closing is extensive
        }
    }
}

TEST_CASE("closure, exterior, and band on a strip") {
    const GridOpenSet strip = rows_set(8, {0});
    const GridOpenSet cl = closure8(strip);
    for (int i = 0; i < 8; ++i) {
        CHECK(cl.member(i, 7));
        CHECK(cl.member(i, 0));
        CHECK(cl.member(i, 1));
        CHECK_FALSE(cl.member(i, 2));
    }
    const GridOpenSet ext = perp(strip);
    CHECK(ext == rows_set(8, {2, 3, 4, 5, 6}));
    CHECK(regularize(strip) == strip);
    CHECK(boundary_band(strip) == rows_set(8, {7, 0, 1}));
}

TEST_CASE("components respect toroidal adjacency and are ordered by first cell") {
    GridOpenSet s(8);
    s.insert(0, 3);
    s.insert(7, 3); // wraps to the first blob
    s.insert(1, 3);
    s.insert(4, 6);
    s.insert(4, 7);
    s.insert(4, 0); // wraps vertically
    const auto comps = components(s);
    REQUIRE(comps.size() == 2);
    // the vertically wrapping blob owns cell (4, 0), the smallest row-major cell
    CHECK(comps[0].count() == 3);
    CHECK(comps[0].member(4, 0));
    CHECK(comps[0].member(4, 6));
    CHECK(comps[1].count() == 3);
    CHECK(comps[1].member(7, 3));
}

TEST_CASE("winding classification of strips, blobs, and staircases") {
    const auto horizontal = winding_class(rows_set(8, {3}));
    CHECK(horizontal.kind == WindingKind::Winding);
    REQUIRE(horizontal.directions.size() == 1);
    CHECK(horizontal.directions[0] == IntVec{1, 0});

    GridOpenSet vert(8);
    for (int j = 0; j < 8; ++j) vert.insert(5, j);
    const auto vertical = winding_class(vert);
    CHECK(vertical.kind == WindingKind::Winding);
    REQUIRE(vertical.directions.size() == 1);
    CHECK(vertical.directions[0] == IntVec{0, 1});

    GridOpenSet diag(8);
    for (int i = 0; i < 8; ++i) {
        diag.insert(i, i);
        diag.insert(i, (i + 1) % 8);
    }
    const auto diagonal = winding_class(diag);
    CHECK(diagonal.kind == WindingKind::Winding);
    REQUIRE(diagonal.directions.size() == 1);
    CHECK(diagonal.directions[0] == IntVec{1, 1});

    GridOpenSet blob(8);
    for (int j = 2; j <= 3; ++j)
        for (int i = 2; i <= 3; ++i) blob.insert(i, j);
    CHECK(winding_class(blob).kind == WindingKind::Elementary);

    const auto full = winding_class(GridOpenSet::universe(8));
    CHECK(full.kind == WindingKind::Winding);
    REQUIRE(full.directions.size() == 2);
    CHECK(full.directions[0] == IntVec{0, 1});
    CHECK(full.directions[1] == IntVec{1, 0});
}

TEST_CASE("steep staircase is undetermined in a small window, resolved in a larger one") {
    // slope-3 staircase on a 12-grid: joins only at deck offset (1, 3)
    GridOpenSet stair(12);
    for (int i = 0; i < 12; ++i)
        for (int d = 0; d <= 3; ++d) stair.insert(i, (3 * i + d) % 12);
    REQUIRE(components(stair).size() == 1);
    CHECK(winding_class(stair, 2).kind == WindingKind::Undetermined);
    const auto resolved = winding_class(stair, 3);
    CHECK(resolved.kind == WindingKind::Winding);
    REQUIRE(resolved.directions.size() == 1);
    CHECK(resolved.directions[0] == IntVec{1, 3});
}

TEST_CASE("column segment that never wraps is elementary") {
    GridOpenSet seg(8);
    for (int j = 0; j < 7; ++j) seg.insert(2, j);
    CHECK(winding_class(seg).kind == WindingKind::Elementary);
}

TEST_CASE("hole detection in lifts") {
    GridOpenSet ring(8);
    for (int j = 2; j <= 4; ++j)
        for (int i = 2; i <= 4; ++i)
            if (i != 3 || j != 3) ring.insert(i, j);
    CHECK_FALSE(simply_connected_lift_check(ring));

    GridOpenSet block(8);
    for (int j = 2; j <= 4; ++j)
        for (int i = 2; i <= 4; ++i) block.insert(i, j);
    CHECK(simply_connected_lift_check(block));

    CHECK(simply_connected_lift_check(rows_set(8, {0})));
}

TEST_CASE("refinement preserves membership geometry") {
    Rng rng(55);
    const GridOpenSet s = GridOpenSet::random(8, rng, 0.4);
    const GridOpenSet r = refine(s, 4);
    CHECK(r.resolution() == 32);
    CHECK(r.count() == s.count() * 16);
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) CHECK(r.member(i, j) == s.member(i / 4, j / 4));
}

TEST_CASE("set algebra basics") {
    GridOpenSet a(4), b(4);
    a.insert(0, 0);
    a.insert(1, 1);
    b.insert(1, 1);
    b.insert(2, 2);
    CHECK(a.set_union(b).count() == 3);
    CHECK(a.set_intersect(b).count() == 1);
    CHECK(a.set_difference(b).count() == 1);
    CHECK(a.symmetric_difference(b).count() == 2);
    CHECK(a.complement().count() == 14);
    CHECK(a.subset_of(a.set_union(b)));
    CHECK_FALSE(a.subset_of(b));
    CHECK(GridOpenSet::universe(4).is_universe());
    CHECK_THROWS_AS(a.set_union(GridOpenSet(8)), std::invalid_argument);
    CHECK_THROWS_AS(GridOpenSet(0), std::invalid_argument);
}
