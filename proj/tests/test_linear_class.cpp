#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "toruslab/matrix.hpp"

using namespace toruslab;

TEST_CASE("classification agrees with the eigen-modulus reference over window 5") {
    for (long long a = -5; a <= 5; ++a)
        for (long long b = -5; b <= 5; ++b)
            for (long long c = -5; c <= 5; ++c)
                for (long long d = -5; d <= 5; ++d) {
                    const IntMatrix2 m{a, b, c, d};
                    const SpectralClass cls = classify(m);
                    INFO("matrix [[" << a << "," << b << "],[" << c << "," << d << "]]");
                    CHECK(cls.kind == oracle::reference_case(m));
                    CHECK(cls.det == a * d - b * c);
                    CHECK(cls.trace == a + d);
                    CHECK(cls.degree == std::abs(cls.det));
                }
}

TEST_CASE("pinned classifications") {
    CHECK(classify({2, 0, 0, 1}).kind == SpectralCase::UnitEigenvalue);
    CHECK(classify({2, 0, 0, 2}).kind == SpectralCase::IntegerExpanding);
    CHECK(classify({2, 0, 0, -2}).kind == SpectralCase::IntegerExpanding);
    CHECK(classify({3, 1, 1, 1}).kind == SpectralCase::IrrationalHyperbolic);
    CHECK(classify({4, 2, 1, 0}).kind == SpectralCase::IrrationalHyperbolic);
    CHECK(classify({3, 1, 1, 2}).kind == SpectralCase::IrrationalExpanding);
    CHECK(classify({2, 1, 1, -1}).kind == SpectralCase::IrrationalExpanding);
    CHECK(classify({1, 1, -1, 1}).kind == SpectralCase::ComplexExpanding);
    CHECK(classify({2, 1, -1, 1}).kind == SpectralCase::ComplexExpanding);
    CHECK(classify({2, 1, 1, 1}).kind == SpectralCase::Invertible);
    CHECK(classify({1, 0, 0, 1}).kind == SpectralCase::Invertible);
    CHECK(classify({1, 2, 2, 4}).kind == SpectralCase::Singular);
    CHECK(classify({0, 0, 0, 0}).kind == SpectralCase::Singular);
}

TEST_CASE("case indices and the all-transitive predicate") {
    CHECK(classify({2, 0, 0, 1}).case_index() == 1);
    CHECK(classify({2, 0, 0, 2}).case_index() == 2);
    CHECK(classify({3, 1, 1, 1}).case_index() == 3);
    CHECK(classify({3, 1, 1, 2}).case_index() == 4);
    CHECK(classify({1, 1, -1, 1}).case_index() == 5);
    CHECK(classify({2, 1, 1, 1}).case_index() == 0);

    CHECK_FALSE(is_all_transitive_class(classify({2, 0, 0, 1})));
    CHECK(is_all_transitive_class(classify({2, 0, 0, 2})));
    CHECK(is_all_transitive_class(classify({3, 1, 1, 1})));
    CHECK(is_all_transitive_class(classify({3, 1, 1, 2})));
    CHECK(is_all_transitive_class(classify({1, 1, -1, 1})));
    CHECK_THROWS_AS(is_all_transitive_class(classify({2, 1, 1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(is_all_transitive_class(classify({1, 2, 2, 4})), std::invalid_argument);
}

TEST_CASE("integer eigenvalue data is ordered by modulus and multiplies out") {
    for (long long a = -4; a <= 4; ++a)
        for (long long b = -4; b <= 4; ++b)
            for (long long c = -4; c <= 4; ++c)
                for (long long d = -4; d <= 4; ++d) {
                    const SpectralClass cls = classify({a, b, c, d});
                    if (cls.eigen.kind != EigenData::Kind::IntegerPair) continue;
                    INFO("matrix [[" << a << "," << b << "],[" << c << "," << d << "]]");
                    CHECK(cls.eigen.k + cls.eigen.l == a + d);
                    CHECK(cls.eigen.k * cls.eigen.l == a * d - b * c);
                    CHECK(std::abs(cls.eigen.k) >= std::abs(cls.eigen.l));
                }
}

TEST_CASE("coset transversal hits every class exactly once") {
    const std::vector<IntMatrix2> mats = {{2, 0, 0, 1}, {2, 1, 0, 3},  {3, 1, 1, 1},
                                          {-2, 1, 1, 2}, {0, 2, -1, 0}, {4, 2, 1, 0},
                                          {2, 1, 1, -1}, {-3, 0, 0, -3}};
    for (const IntMatrix2& m : mats) {
        const auto reps = coset_representatives(m);
        const long long deg = m.degree();
        INFO("matrix [[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]");
        REQUIRE((long long)reps.size() == deg);
        CHECK(reps.front() == IntVec{0, 0});
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = i + 1; j < reps.size(); ++j)
                CHECK_FALSE(oracle::congruent(m, reps[i], reps[j]));
        // every lattice point in a window is congruent to some representative
        for (long long x = -3; x <= 3; ++x)
            for (long long y = -3; y <= 3; ++y) {
                bool hit = false;
                for (const IntVec& r : reps) hit = hit || oracle::congruent(m, {x, y}, r);
                CHECK(hit);
            }
    }
    CHECK_THROWS_AS(coset_representatives({1, 2, 2, 4}), std::invalid_argument);
}

TEST_CASE("lattice multiple is a preimage and is minimal") {
    const std::vector<std::pair<IntMatrix2, IntVec>> cases = {
        {{2, 1, 0, 3}, {1, 1}}, {{2, 0, 0, 2}, {1, 0}}, {{3, 1, 1, 1}, {0, 1}},
        {{2, 1, 1, -1}, {1, 2}}, {{4, 2, 1, 0}, {1, 1}}, {{2, 0, 0, 1}, {1, 1}}};
    for (const auto& [m, w] : cases) {
        const LatticeMultiple lm = solve_lattice_multiple(m, w);
        INFO("matrix [[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]] w=(" << w.x << ","
                         << w.y << ")");
        CHECK(m.apply(lm.v) == IntVec{lm.n * w.x, lm.n * w.y});
        CHECK(lm.n == oracle::smallest_multiple(m, w, lm.n + 1));
    }
    // a pinned value, worked by hand through the adjugate
    const LatticeMultiple lm = solve_lattice_multiple({2, 1, 0, 3}, {1, 1});
    CHECK(lm.n == 3);
    CHECK(lm.v == IntVec{1, 1});
}

TEST_CASE("spectral data survives large entries without overflow") {
    const IntMatrix2 m{1000000000, 999999999, -999999998, 999999997};
    const SpectralClass cls = classify(m);
    CHECK(cls.det == m.det());
    CHECK(cls.kind == oracle::reference_case(m));
    const IntMatrix2 huge{3000000000000000000LL, 0, 0, 3000000000000000000LL};
    CHECK_THROWS_AS(huge.det(), std::overflow_error);
}
