#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace toruslab {

struct IntVec {
    long long x = 0;
    long long y = 0;

    friend bool operator==(const IntVec&, const IntVec&) = default;
    friend bool operator<(const IntVec& a, const IntVec& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

// Row-major 2x2 integer matrix [[a, b], [c, d]].
struct IntMatrix2 {
    long long a = 0, b = 0, c = 0, d = 0;

    long long trace() const { return a + d; }

    long long det() const {
        __int128 v = (__int128)a * d - (__int128)b * c;
        return checked_narrow(v, "determinant");
    }

    long long degree() const { return det() < 0 ? -det() : det(); }

    // adj(M) * M = det(M) * I
    IntMatrix2 adjugate() const { return {d, -b, -c, a}; }

    IntVec apply(const IntVec& v) const {
        return {checked_narrow((__int128)a * v.x + (__int128)b * v.y, "matrix-vector product"),
                checked_narrow((__int128)c * v.x + (__int128)d * v.y, "matrix-vector product")};
    }

    friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;

    static long long checked_narrow(__int128 v, const char* what) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error(std::string("64-bit overflow computing ") + what);
        return (long long)v;
    }
};

enum class SpectralCase {
    UnitEigenvalue,      // integer eigenvalues, 1 = |lambda| < |mu|
    IntegerExpanding,    // integer eigenvalues, 1 < |lambda| <= |mu|
    IrrationalHyperbolic, // real irrational, 0 < |lambda| < 1 < |mu|
    IrrationalExpanding, // real irrational, both moduli > 1
    ComplexExpanding,    // non-real conjugate pair, |lambda| = sqrt(det) > 1
    Invertible,          // |det| = 1
    Singular,            // det = 0
};

inline const char* to_string(SpectralCase c) {
    switch (c) {
        case SpectralCase::UnitEigenvalue: return "unit_eigenvalue";
        case SpectralCase::IntegerExpanding: return "integer_expanding";
        case SpectralCase::IrrationalHyperbolic: return "irrational_hyperbolic";
        case SpectralCase::IrrationalExpanding: return "irrational_expanding";
        case SpectralCase::ComplexExpanding: return "complex_expanding";
        case SpectralCase::Invertible: return "invertible";
        case SpectralCase::Singular: return "singular";
    }
    return "?";
}

// Exact eigenvalue description. IntegerPair holds the eigenvalues themselves;
// Surd and ComplexPair hold (trace, discriminant), the roots being
// (trace +- sqrt(discriminant)) / 2.
struct EigenData {
    enum class Kind { IntegerPair, Surd, ComplexPair };
    Kind kind = Kind::Surd;
    long long k = 0, l = 0;      // IntegerPair only, |k| >= |l|
    long long trace = 0;
    long long discriminant = 0;
};

struct SpectralClass {
    SpectralCase kind = SpectralCase::Singular;
    long long degree = 0; // |det|
    long long trace = 0;
    long long det = 0;
    long long discriminant = 0;
    EigenData eigen;

    // 1..5 for the endomorphism cases, 0 for Invertible/Singular.
    int case_index() const {
        switch (kind) {
            case SpectralCase::UnitEigenvalue: return 1;
            case SpectralCase::IntegerExpanding: return 2;
            case SpectralCase::IrrationalHyperbolic: return 3;
            case SpectralCase::IrrationalExpanding: return 4;
            case SpectralCase::ComplexExpanding: return 5;
            default: return 0;
        }
    }
};

namespace detail {

inline long long isqrt_ll(long long n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    if (n == 0) return 0;
    long long r = (long long)__builtin_sqrtl((long double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_perfect_square(long long n, long long* root = nullptr) {
    if (n < 0) return false;
    long long r = isqrt_ll(n);
    if (root) *root = r;
    return r * r == n;
}

} // namespace detail

// Total classification by exact integer arithmetic; the only failure mode is
// 64-bit overflow of trace^2 - 4 det, which is rejected explicitly.
inline SpectralClass classify(const IntMatrix2& m) {
    SpectralClass out;
    out.trace = m.trace();
    out.det = m.det();
    out.degree = out.det < 0 ? -out.det : out.det;
    __int128 disc = (__int128)out.trace * out.trace - (__int128)4 * out.det;
    out.discriminant = IntMatrix2::checked_narrow(disc, "discriminant");
    out.eigen.trace = out.trace;
    out.eigen.discriminant = out.discriminant;

    long long root = 0;
    const bool square = detail::is_perfect_square(out.discriminant, &root);
    if (square) {
        // trace and root have equal parity (disc == trace^2 mod 4), so the
        // roots are integers. Stored with |k| >= |l|.
        out.eigen.kind = EigenData::Kind::IntegerPair;
        out.eigen.k = (out.trace + root) / 2;
        out.eigen.l = (out.trace - root) / 2;
        if (std::abs(out.eigen.k) < std::abs(out.eigen.l)) std::swap(out.eigen.k, out.eigen.l);
    } else {
        out.eigen.kind = out.discriminant < 0 ? EigenData::Kind::ComplexPair : EigenData::Kind::Surd;
    }

    if (out.det == 0) {
        out.kind = SpectralCase::Singular;
        return out;
    }
    if (out.degree == 1) {
        out.kind = SpectralCase::Invertible;
        return out;
    }

    // |det| >= 2 from here on.
    if (out.discriminant < 0) {
        out.kind = SpectralCase::ComplexExpanding; // |lambda|^2 = det >= 2
        return out;
    }
    if (square) {
        const long long small = std::abs(out.eigen.l);
        out.kind = small == 1 ? SpectralCase::UnitEigenvalue : SpectralCase::IntegerExpanding;
        return out;
    }
    // Real irrational roots: the characteristic polynomial p(x) = x^2 - t x + det
    // has a root of modulus < 1 iff p(1) and p(-1) differ in sign. Roots of
    // modulus exactly 1 would be rational, so the signs are never zero here.
    const long long p1 = 1 - out.trace + out.det;
    const long long pm1 = 1 + out.trace + out.det;
    out.kind = (p1 > 0) == (pm1 > 0) ? SpectralCase::IrrationalExpanding
                                     : SpectralCase::IrrationalHyperbolic;
    return out;
}

// Whole-homotopy-class transitivity from the spectral case. Only meaningful
// for degree >= 2.
inline bool is_all_transitive_class(const SpectralClass& c) {
    if (c.degree < 2)
        throw std::invalid_argument("is_all_transitive_class requires |det| >= 2");
    return c.kind == SpectralCase::IntegerExpanding || c.kind == SpectralCase::IrrationalHyperbolic ||
           c.kind == SpectralCase::IrrationalExpanding || c.kind == SpectralCase::ComplexExpanding;
}

inline bool is_all_transitive_class(const IntMatrix2& m) { return is_all_transitive_class(classify(m)); }

// Transversal of Z^2 / M Z^2: the |det M| lattice points of the half-open
// fundamental parallelepiped M [0,1)^2, which contains exactly one point of
// each residue class. (0,0) first, the rest in lexicographic order.
inline std::vector<IntVec> coset_representatives(const IntMatrix2& m) {
    const long long det = m.det();
    if (det == 0) throw std::invalid_argument("coset_representatives requires det != 0");
    const long long deg = det < 0 ? -det : det;

    const long long xs[4] = {0, m.a, m.b, m.a + m.b};
    const long long ys[4] = {0, m.c, m.d, m.c + m.d};
    const long long x_lo = *std::min_element(xs, xs + 4), x_hi = *std::max_element(xs, xs + 4);
    const long long y_lo = *std::min_element(ys, ys + 4), y_hi = *std::max_element(ys, ys + 4);

    const IntMatrix2 adj = m.adjugate();
    std::vector<IntVec> reps;
    reps.reserve((size_t)deg);
    for (long long x = x_lo; x <= x_hi; ++x) {
        for (long long y = y_lo; y <= y_hi; ++y) {
            // w = M t with t = adj(M) w / det; keep t in [0,1)^2.
            const IntVec n = adj.apply({x, y});
            const bool inside = det > 0 ? (n.x >= 0 && n.x < det && n.y >= 0 && n.y < det)
                                        : (n.x <= 0 && n.x > det && n.y <= 0 && n.y > det);
            if (inside) reps.push_back({x, y});
        }
    }
    if ((long long)reps.size() != deg)
        throw std::logic_error("fundamental parallelepiped transversal has wrong size");
    std::sort(reps.begin(), reps.end());
    auto zero = std::find(reps.begin(), reps.end(), IntVec{0, 0});
    std::rotate(reps.begin(), zero, zero + 1);
    return reps;
}

struct LatticeMultiple {
    long long n = 1;
    IntVec v;
};

// Smallest n >= 1 such that M v = n w has an integer solution v; n | |det M|.
inline LatticeMultiple solve_lattice_multiple(const IntMatrix2& m, const IntVec& w) {
    const long long det = m.det();
    if (det == 0) throw std::invalid_argument("solve_lattice_multiple requires det != 0");
    const long long deg = det < 0 ? -det : det;
    const IntVec g = m.adjugate().apply(w); // v = n adj(M) w / det
    const long long n1 = deg / std::gcd(deg, std::abs(g.x));
    const long long n2 = deg / std::gcd(deg, std::abs(g.y));
    LatticeMultiple out;
    out.n = std::lcm(n1, n2);
    out.v = {out.n * g.x / det, out.n * g.y / det};
    return out;
}

} // namespace toruslab
