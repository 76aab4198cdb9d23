#include <catch2/catch_amalgamated.hpp>

#include "toruslab/loop.hpp"
#include "toruslab/rng.hpp"

using namespace toruslab;

TEST_CASE("homotopy class is the lift displacement, integrality enforced") {
    const PolyLoop l({{0.1, 0.2}, {0.6, 0.9}, {1.1, 1.2}});
    CHECK(l.homotopy_class() == IntVec{1, 1});
    const PolyLoop null_loop({{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}, {0.3, 0.3}});
    CHECK(null_loop.homotopy_class() == IntVec{0, 0});
    CHECK_THROWS_AS(PolyLoop({{0.0, 0.0}, {0.5, 0.3}}), std::invalid_argument);
    CHECK_THROWS_AS(PolyLoop({{0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("independent straight loops always meet") {
    CHECK(loops_intersect(PolyLoop::line({0.0, 0.25}, {1, 0}), PolyLoop::line({0.7, 0.0}, {0, 1})));
    CHECK(loops_intersect(PolyLoop::line({0.1, 0.9}, {1, 0}), PolyLoop::line({0.0, 0.0}, {1, 1})));
    CHECK(loops_intersect(PolyLoop::line({0.2, 0.3}, {2, 1}), PolyLoop::line({0.8, 0.8}, {1, 1})));
    Rng rng(31);
    for (int k = 0; k < 300; ++k) {
        IntVec c1{0, 0}, c2{0, 0};
        while (c1.x * c2.y - c1.y * c2.x == 0) {
            c1 = {rng.next_int(-3, 3), rng.next_int(-3, 3)};
            c2 = {rng.next_int(-3, 3), rng.next_int(-3, 3)};
        }
        const PolyLoop l1 = PolyLoop::line({rng.next_double(), rng.next_double()}, c1);
        const PolyLoop l2 = PolyLoop::line({rng.next_double(), rng.next_double()}, c2);
        INFO("classes (" << c1.x << "," << c1.y << ") and (" << c2.x << "," << c2.y << ")");
        CHECK(loops_intersect(l1, l2));
    }
}

TEST_CASE("parallel translates of a line miss each other") {
    CHECK_FALSE(
        loops_intersect(PolyLoop::line({0.0, 0.25}, {1, 0}), PolyLoop::line({0.0, 0.75}, {1, 0})));
    CHECK_FALSE(
        loops_intersect(PolyLoop::line({0.2, 0.0}, {0, 1}), PolyLoop::line({0.7, 0.0}, {0, 1})));
    CHECK_FALSE(loops_intersect(PolyLoop::line({0.0, 0.2}, {1, 1}),
                                PolyLoop::line({0.0, 0.7}, {1, 1})));
    // same base line: identical loops intersect trivially
    CHECK(loops_intersect(PolyLoop::line({0.0, 0.25}, {1, 0}), PolyLoop::line({0.5, 0.25}, {1, 0})));
}

TEST_CASE("intersection is detected across the wrap seam") {
    const PolyLoop box(
        {{0.97, 0.45}, {1.07, 0.45}, {1.07, 0.55}, {0.97, 0.55}, {0.97, 0.45}});
    CHECK(loops_intersect(box, PolyLoop::line({0.02, 0.0}, {0, 1})));
    CHECK_FALSE(loops_intersect(box, PolyLoop::line({0.5, 0.0}, {0, 1})));
}

TEST_CASE("winding numbers of planar boxes on the torus") {
    const PolyLoop ccw({{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}, {0.25, 0.25}});
    CHECK(winding_number(ccw, {0.5, 0.5}) == 1);
    CHECK(winding_number(ccw, {0.1, 0.1}) == 0);
    CHECK(winding_number(ccw, {0.9, 0.5}) == 0);
    const PolyLoop cw({{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.75}, {0.75, 0.25}, {0.25, 0.25}});
    CHECK(winding_number(cw, {0.5, 0.5}) == -1);
    CHECK_THROWS_AS(winding_number(ccw, {0.25, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(winding_number(PolyLoop::line({0.0, 0.1}, {1, 0}), {0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("pushing a loop through a map multiplies its class by the linear part") {
    Rng rng(37);
    for (const char* name : {"example-2x-halfshift", "expanding-shear", "counterexample"}) {
        const Endomorphism f = make_preset(name);
        for (int k = 0; k < 60; ++k) {
            IntVec c{0, 0};
            while (c.x == 0 && c.y == 0) c = {rng.next_int(-2, 2), rng.next_int(-2, 2)};
            const PolyLoop l = PolyLoop::line({rng.next_double(), rng.next_double()}, c);
            const PolyLoop fl = push_forward(f, l, 48);
            INFO(name);
            CHECK(fl.homotopy_class() == f.linear().apply(c));
        }
    }
}
