#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "toruslab/matrix.hpp"
#include "toruslab/rng.hpp"

namespace toruslab {

// Frequency of integer spectrum among integer matrices with entries in
// [-n, n]. The discriminant identity (a+d)^2 - 4(ad-bc) = (a-d)^2 + 4bc makes
// the count depend only on the difference a-d and the product bc, which cuts
// the enumeration from (2n+1)^4 matrices to (4n+1) differences times the
// product histogram.
struct HetzelRow {
    int n = 0;
    long long total = 0;
    long long hits = 0; // matrices whose characteristic roots are integers
    double fraction = 0.0;
    bool exact = false;
};

inline constexpr long long kHetzelExactCap = 100000000; // on (2n+1)^4

inline HetzelRow hetzel_exact(int n) {
    if (n < 0) throw std::invalid_argument("entry window must be >= 0");
    const long long side = 2LL * n + 1;
    const long long total = side * side * side * side;
    if (total > kHetzelExactCap)
        throw std::invalid_argument("exact enumeration capped at (2n+1)^4 <= 1e8; use monte carlo");

    std::map<long long, long long> product_count;
    for (long long b = -n; b <= n; ++b)
        for (long long c = -n; c <= n; ++c) ++product_count[b * c];

    long long hits = 0;
    for (long long delta = -2LL * n; delta <= 2LL * n; ++delta) {
        const long long pairs = side - std::abs(delta); // (a, d) with a - d = delta
        for (const auto& [q, cnt] : product_count) {
            const long long disc = delta * delta + 4 * q;
            if (disc >= 0 && detail::is_perfect_square(disc)) hits += pairs * cnt;
        }
    }
    return {n, total, hits, (double)hits / (double)total, true};
}

inline HetzelRow hetzel_montecarlo(int n, long long samples, std::uint64_t seed) {
    if (n < 0 || samples < 1) throw std::invalid_argument("need window >= 0 and samples >= 1");
    Rng rng = Rng(seed).split(0x6865747a);
    long long hits = 0;
    for (long long s = 0; s < samples; ++s) {
        const long long a = rng.next_int(-n, n), b = rng.next_int(-n, n);
        const long long c = rng.next_int(-n, n), d = rng.next_int(-n, n);
        const long long disc = (a - d) * (a - d) + 4 * b * c;
        if (disc >= 0 && detail::is_perfect_square(disc)) ++hits;
    }
    return {n, samples, hits, (double)hits / (double)samples, false};
}

// Per-class census over the same entry window, for the classification reports.
struct SpectralCensus {
    int n = 0;
    long long total = 0;
    std::map<SpectralCase, long long> by_case;
    long long all_transitive = 0;
};

inline SpectralCensus spectral_census(int n) {
    if (n < 0) throw std::invalid_argument("entry window must be >= 0");
    const long long side = 2LL * n + 1;
    if (side * side * side * side > kHetzelExactCap)
        throw std::invalid_argument("census capped at (2n+1)^4 <= 1e8");
    SpectralCensus out;
    out.n = n;
    for (long long a = -n; a <= n; ++a)
        for (long long b = -n; b <= n; ++b)
            for (long long c = -n; c <= n; ++c)
                for (long long d = -n; d <= n; ++d) {
                    const SpectralClass cls = classify({a, b, c, d});
                    ++out.by_case[cls.kind];
                    ++out.total;
                    if (cls.degree >= 2 && is_all_transitive_class(cls)) ++out.all_transitive;
                }
    return out;
}

} // namespace toruslab
