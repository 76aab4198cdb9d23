#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "toruslab/endomorphism.hpp"
#include "toruslab/rng.hpp"

using namespace toruslab;

TEST_CASE("trig profile evaluation, derivative, and certified bound") {
    const TrigPoly p({0.1, -0.02}, {0.0, 0.05});
    for (double x : {0.0, 0.17, 0.5, 0.93}) {
        const double h = 1e-6;
        const double fd = (p.eval(x + h) - p.eval(x - h)) / (2 * h);
        CHECK(p.derivative(x) == Catch::Approx(fd).margin(1e-6));
        CHECK(std::abs(p.derivative(x)) <= p.derivative_bound() + 1e-12);
    }
    CHECK(p.eval(0.25) == Catch::Approx(0.1 * 1.0 - 0.02 * 0.0 + 0.05 * -1.0).margin(1e-12));
    CHECK_THROWS_AS(TrigPoly(std::vector<double>(9, 0.1), {}), std::invalid_argument);
    CHECK(TrigPoly().zero());
    CHECK_FALSE(TrigPoly::single_sin(0.3).zero());
}

TEST_CASE("circle map construction rejects non-monotone lifts") {
    CHECK_THROWS_AS(CircleMap(1, TrigPoly::single_sin(0.2)), std::invalid_argument);
    CHECK_THROWS_AS(CircleMap(0, {}), std::invalid_argument);
    CHECK_NOTHROW(CircleMap(1, TrigPoly::single_sin(0.05)));
    CHECK_NOTHROW(CircleMap(2, TrigPoly::single_sin(0.1)));
}

TEST_CASE("circle preimages are complete, verified forward, exact at endpoints") {
    const CircleMap plain(2, {});
    const auto pre0 = plain.preimages(0.0);
    REQUIRE(pre0.size() == 2);
    CHECK(pre0[0] == 0.0);
    CHECK(pre0[1] == 0.5);

    const CircleMap warped(3, TrigPoly({0.03, -0.01}, {0.02}));
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        const double x = rng.next_double();
        const auto pre = warped.preimages(x);
        REQUIRE(pre.size() == 3);
        for (double xi : pre) {
            const double fx = warped.lift(xi);
            const double frac = fx - std::floor(fx);
            const double err = std::min(std::abs(frac - x), 1.0 - std::abs(frac - x));
            CHECK(err < 1e-10);
        }
    }

    // degree-1 contraction toward 0: preimage of the fixed point is itself, exactly
    const CircleMap contract(1, TrigPoly::single_sin(-0.05));
    const auto fixed = contract.preimages(0.0);
    REQUIRE(fixed.size() == 1);
    CHECK(fixed[0] == 0.0);
}

TEST_CASE("chain preimages verify forward and count the degree") {
    const Endomorphism f = make_preset("example-2x-halfshift");
    Rng rng(11);
    for (int k = 0; k < 40; ++k) {
        const TorusPoint q{rng.next_double(), rng.next_double()};
        const auto pre = f.preimages(q);
        REQUIRE((long long)pre.size() == f.degree());
        for (const TorusPoint& p : pre) CHECK(torus_distance(f.eval(p), q) < 1e-10);
    }
    const Endomorphism g = make_preset("expanding-shear");
    for (int k = 0; k < 40; ++k) {
        const TorusPoint q{rng.next_double(), rng.next_double()};
        const auto pre = g.preimages(q);
        REQUIRE((long long)pre.size() == 4);
        for (const TorusPoint& p : pre) CHECK(torus_distance(g.eval(p), q) < 1e-9);
    }
}

TEST_CASE("product-form preimages go through the numeric route") {
    const Endomorphism f = make_counterexample(0.05);
    CHECK_THROWS_AS(f.preimages({0.3, 0.3}), std::invalid_argument);
    Rng rng(13);
    for (int k = 0; k < 40; ++k) {
        const TorusPoint q{rng.next_double(), rng.next_double()};
        const auto pre = f.preimages_numeric(q);
        REQUIRE((long long)pre.size() == 2);
        for (const TorusPoint& p : pre) CHECK(torus_distance(f.eval(p), q) < 1e-9);
    }
}

TEST_CASE("chain maps satisfy the preimage mass identity to float precision") {
    for (const char* name : {"example-2x-halfshift", "expanding-shear"}) {
        const ConservativityCheck c = check_conservative(make_preset(name), 100, 5, 1e-9);
        INFO(name);
        CHECK(c.pass);
        CHECK(c.max_deviation < 1e-9);
    }
}

TEST_CASE("the counterexample breaks the mass identity while expanding area") {
    const double eps = 0.05;
    const Endomorphism f = make_counterexample(eps);
    const ConservativityCheck c = check_conservative(f, 200, 5, 1e-6);
    CHECK_FALSE(c.pass);
    CHECK(c.max_deviation > 0.1);

    const double floor_expected = 2.0 * (1.0 - 2.0 * std::numbers::pi * eps);
    double jmin = 1e300;
    for (int j = 0; j < 256; ++j)
        for (int i = 0; i < 256; ++i)
            jmin = std::min(jmin, f.jacobian_det({(i + 0.5) / 256, (j + 0.5) / 256}));
    CHECK(jmin >= floor_expected - 1e-9);
    CHECK(jmin >= 1.37);
    CHECK(f.jacobian_det({0.4, 0.0}) == Catch::Approx(floor_expected).margin(1e-12));
}

TEST_CASE("counterexample parameter windows are enforced") {
    CHECK_THROWS_AS(make_counterexample(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_counterexample(1.0 / (4.0 * std::numbers::pi)), std::invalid_argument);
    CHECK_NOTHROW(make_counterexample(0.079));
    CHECK_THROWS_AS(make_counterexample_degree2(0.15), std::invalid_argument);
    CHECK_NOTHROW(make_counterexample_degree2(0.2));

    const Endomorphism f2 = make_counterexample_degree2(0.2);
    const double r = attracting_radius(f2.product().f2);
    CHECK(r > 0.0);
    CHECK(r < 0.5);
    CHECK(std::abs(f2.product().f2.lift(r) - r) < 1e-10);
    // inside the radius the origin attracts
    const double y = r / 2;
    CHECK(std::abs(f2.product().f2.lift(y)) < y);
}

TEST_CASE("lifts commute with deck translations") {
    Rng rng(17);
    for (const char* name : {"example-2x-halfshift", "expanding-shear", "counterexample"}) {
        const Endomorphism f = make_preset(name);
        const IntMatrix2 a = f.linear();
        for (int k = 0; k < 300; ++k) {
            const PlanePoint p{rng.next_double() * 4 - 2, rng.next_double() * 4 - 2};
            const IntVec v{rng.next_int(-3, 3), rng.next_int(-3, 3)};
            const PlanePoint lhs = f.lift_eval(deck_translate(p, v));
            const PlanePoint rhs =
                deck_translate(f.lift_eval(p), {a.a * v.x + a.b * v.y, a.c * v.x + a.d * v.y});
            INFO(name);
            CHECK(std::abs(lhs.x - rhs.x) < 1e-9);
            CHECK(std::abs(lhs.y - rhs.y) < 1e-9);
        }
    }
}

TEST_CASE("derivative bounds dominate sampled differentials") {
    const Endomorphism g = make_preset("expanding-shear");
    const DerivBound b = g.derivative_bound();
    CHECK(b.m[0][0] == Catch::Approx(2.0));
    CHECK(b.m[1][1] == Catch::Approx(2.0));
    CHECK(b.m[0][1] == Catch::Approx(2.0 * 0.1 * 2.0 * std::numbers::pi));
    CHECK(b.m[1][0] == 0.0);

    // finite-difference differential at random points stays under the bound
    Rng rng(23);
    const double h = 1e-7;
    for (int k = 0; k < 100; ++k) {
        const PlanePoint p{rng.next_double(), rng.next_double()};
        const PlanePoint fx1 = g.lift_eval({p.x + h, p.y}), fx0 = g.lift_eval({p.x - h, p.y});
        const PlanePoint fy1 = g.lift_eval({p.x, p.y + h}), fy0 = g.lift_eval({p.x, p.y - h});
        CHECK(std::abs(fx1.x - fx0.x) / (2 * h) <= b.m[0][0] + 1e-5);
        CHECK(std::abs(fy1.x - fy0.x) / (2 * h) <= b.m[0][1] + 1e-5);
        CHECK(std::abs(fx1.y - fx0.y) / (2 * h) <= b.m[1][0] + 1e-5);
        CHECK(std::abs(fy1.y - fy0.y) / (2 * h) <= b.m[1][1] + 1e-5);
    }
}

TEST_CASE("jacobian of a chain map is the linear determinant everywhere") {
    const Endomorphism g = make_preset("expanding-shear");
    CHECK(g.jacobian_det({0.3, 0.8}) == 4.0);
    CHECK(g.conservative());
    CHECK_FALSE(make_counterexample(0.05).conservative());
}

TEST_CASE("endomorphism construction rejects a singular linear part") {
    CHECK_THROWS_AS(Endomorphism::linear_form({1, 2, 2, 4}), std::invalid_argument);
}
