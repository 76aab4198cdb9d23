// Tabulates the spectral classes over small entry windows and walks one
// lattice-multiple computation end to end.

#include <cstdio>

#include "toruslab/hetzel.hpp"
#include "toruslab/matrix.hpp"

using namespace toruslab;

int main() {
    for (int w = 1; w <= 3; ++w) {
        const SpectralCensus census = spectral_census(w);
        std::printf("entries in [-%d, %d]: %lld matrices\n", w, w, census.total);
        for (const auto& [kind, cnt] : census.by_case)
            std::printf("  %-22s %8lld\n", to_string(kind), cnt);
        std::printf("  %-22s %8lld (%.4f)\n\n", "all-transitive class", census.all_transitive,
                    (double)census.all_transitive / (double)census.total);
    }

    const IntMatrix2 m{2, 1, 0, 3};
    const IntVec w{1, 1};
    const LatticeMultiple lm = solve_lattice_multiple(m, w);
    std::printf("smallest n with n*(%lld,%lld) in image lattice of [[%lld,%lld],[%lld,%lld]]: n=%lld, "
                "preimage (%lld,%lld)\n",
                w.x, w.y, m.a, m.b, m.c, m.d, lm.n, lm.v.x, lm.v.y);
    return 0;
}
