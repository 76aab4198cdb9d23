// Walks the doubling-with-half-shift map through the invariant-pair search at
// two resolutions and prints what the machinery sees: saturation growth, the
// pair, winding directions, carousel period, and two-step sheet counts.

#include <cstdio>

#include "toruslab/endomorphism.hpp"
#include "toruslab/grid_set.hpp"
#include "toruslab/transitivity.hpp"

using namespace toruslab;

static void show(const GridOpenSet& s, const char* name) {
    const int n = s.resolution();
    std::printf("%s (%zu cells):\n", name, s.count());
    for (int j = n - 1; j >= 0; --j) {
        std::printf("  ");
        for (int i = 0; i < n; ++i) std::putchar(s.member(i, j) ? '#' : '.');
        std::putchar('\n');
    }
}

int main() {
    const Endomorphism f = make_preset("example-2x-halfshift");
    for (int n : {8, 16}) {
        const InvariantPairResult r = find_invariant_pair(f, n);
        if (r.status != PairStatus::Found) {
            std::printf("n=%d: no pair found\n", n);
            continue;
        }
        std::printf("n=%d: pair found after %d growth steps from seed (%lld,%lld)\n", n,
                    r.iterations, r.seed.x, r.seed.y);
        show(*r.inner, "inner");
        show(*r.outer, "outer");
        const auto comps = components(*r.inner);
        for (size_t c = 0; c < comps.size(); ++c) {
            const WindingVerdict wv = winding_class(comps[c]);
            std::printf("  component %zu: %zu cells, ", c, comps[c].count());
            if (wv.kind == WindingKind::Winding) {
                std::printf("winds along");
                for (const IntVec& d : wv.directions) std::printf(" (%lld,%lld)", d.x, d.y);
            } else {
                std::printf(wv.kind == WindingKind::Elementary ? "elementary" : "undetermined");
            }
            std::printf(", simply connected lift: %s\n",
                        simply_connected_lift_check(comps[c]) ? "yes" : "no");
        }
        std::printf("  component carousel period: %d\n", component_period(f, comps));
        const SheetCount sc = sheet_count_on_set(f, {0.3, 0.05}, *r.inner, 2);
        std::printf("  two-step sheets over (0.3, 0.05): %d%s\n\n", sc.count,
                    sc.ambiguous ? " (ambiguous)" : "");
    }
    return 0;
}
