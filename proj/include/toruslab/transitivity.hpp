#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "toruslab/endomorphism.hpp"
#include "toruslab/grid_set.hpp"
#include "toruslab/matrix.hpp"
#include "toruslab/torus.hpp"

namespace toruslab {

namespace detail {

// Cells k mod n whose cell interval meets the open interval (a, b); strict on
// both sides, so an interval ending exactly on a grid line never claims the
// cell beyond it. Closed-vs-open and open-vs-open agree under this predicate.
inline void cover_cells(double a, double b, int n, std::vector<int>& out) {
    if (!(b > a)) return;
    const double an = a * (double)n, bn = b * (double)n;
    const long long k_lo = (long long)std::floor(an) - 1;
    const long long k_hi = (long long)std::ceil(bn) + 1;
    for (long long k = k_lo; k <= k_hi; ++k) {
        if (!((double)k < bn && (double)(k + 1) > an)) continue;
        long long w = k % n;
        if (w < 0) w += n;
        out.push_back((int)w);
    }
}

} // namespace detail

// Directed graph over the N x N cells: an edge u -> v whenever the image of
// cell u can meet cell v according to sample points padded by the certified
// Lipschitz data. Over-approximates the true transition relation, so a
// disconnected condensation is evidence against transitivity while a single
// class is only consistent with it.
struct SymbolicImageGraph {
    int n = 0;
    int samples = 0;
    std::vector<std::vector<int>> succ; // sorted unique, indexed j * n + i
};

inline SymbolicImageGraph build_symbolic_image(const Endomorphism& f, int n, int samples) {
    if (n < 2) throw std::invalid_argument("symbolic image needs resolution >= 2");
    if (samples < 4) throw std::invalid_argument("symbolic image needs >= 4 samples per axis");
    SymbolicImageGraph g;
    g.n = n;
    g.samples = samples;
    g.succ.assign((size_t)n * n, {});

    const DerivBound bound = f.derivative_bound();
    const double h = 1.0 / ((double)n * (double)samples);
    const double rx = bound.row_sum(0) * h * 0.5;
    const double ry = bound.row_sum(1) * h * 0.5;

    std::vector<int> xc, yc;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            auto& edges = g.succ[(size_t)j * n + i];
            for (int v = 0; v < samples; ++v)
                for (int u = 0; u < samples; ++u) {
                    const double px = ((double)i + ((double)u + 0.5) / samples) / n;
                    const double py = ((double)j + ((double)v + 0.5) / samples) / n;
                    const PlanePoint q = f.lift_eval({px, py});
                    xc.clear();
                    yc.clear();
                    detail::cover_cells(q.x - rx, q.x + rx, n, xc);
                    detail::cover_cells(q.y - ry, q.y + ry, n, yc);
                    for (int cy : yc)
                        for (int cx : xc) edges.push_back(cy * n + cx);
                }
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        }
    return g;
}

struct SccSummary {
    int count = 0;
    size_t largest = 0;
    bool strongly_connected = false;
    std::vector<int> component; // id per node, reverse topological order of ids
};

// Iterative Tarjan; node counts reach 128^2 so no recursion.
inline SccSummary scc_decomposition(const SymbolicImageGraph& g) {
    const int nn = g.n * g.n;
    SccSummary out;
    out.component.assign(nn, -1);
    std::vector<int> index(nn, -1), low(nn, 0), edge_pos(nn, 0);
    std::vector<int> stack, call;
    std::vector<std::uint8_t> on_stack(nn, 0);
    int next_index = 0;
    std::vector<size_t> comp_size;

    for (int root = 0; root < nn; ++root) {
        if (index[root] >= 0) continue;
        call.push_back(root);
        while (!call.empty()) {
            const int v = call.back();
            if (index[v] < 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            auto& edges = g.succ[v];
            while (edge_pos[v] < (int)edges.size()) {
                const int w = edges[edge_pos[v]];
                if (index[w] < 0) {
                    ++edge_pos[v];
                    call.push_back(w);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
                ++edge_pos[v];
            }
            if (descended) continue;
            call.pop_back();
            if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
            if (low[v] == index[v]) {
                const int id = (int)comp_size.size();
                size_t sz = 0;
                for (;;) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    out.component[w] = id;
                    ++sz;
                    if (w == v) break;
                }
                comp_size.push_back(sz);
            }
        }
    }
    out.count = (int)comp_size.size();
    out.largest = comp_size.empty() ? 0 : *std::max_element(comp_size.begin(), comp_size.end());
    out.strongly_connected = out.count == 1;
    return out;
}

// Outer estimate of the preimage of grid sets under f, one cell at a time and
// memoized. Each cell is cut into subdiv x subdiv boxes, every inverse branch
// is evaluated at the box corners, and the open bounding hull of the corner
// images is converted to cells. No additive padding: hulls of monotone branch
// inverses already cover the true preimage of the open boxes, and exactly so
// for maps that are affine on grid lines, which is what keeps invariant
// circles from leaking across cell boundaries.
class GridPreimageOracle {
public:
    GridPreimageOracle(const Endomorphism& f, int n, int subdiv = 2)
        : f_(&f), n_(n), g_(subdiv), cache_((size_t)n * n), have_((size_t)n * n, 0) {
        if (n < 2) throw std::invalid_argument("preimage oracle needs resolution >= 2");
        if (subdiv < 1) throw std::invalid_argument("subdiv must be >= 1");
        if (f.is_product_form()) {
            build_axis_cover(f.product().f1, col_cover_);
            build_axis_cover(f.product().f2, row_cover_);
        } else {
            corner_cache_.assign(((size_t)n * g_ + 1) * ((size_t)n * g_ + 1),
                                 {std::numeric_limits<double>::quiet_NaN(), 0.0});
            reps_ = coset_representatives(f.linear());
            const IntMatrix2 adj = f.linear().adjugate();
            det_ = (double)f.linear().det();
            inv_[0][0] = (double)adj.a / det_;
            inv_[0][1] = (double)adj.b / det_;
            inv_[1][0] = (double)adj.c / det_;
            inv_[1][1] = (double)adj.d / det_;
        }
    }

    int resolution() const { return n_; }

    const std::vector<int>& cell_preimages(int cell) {
        if (!have_[cell]) {
            cache_[cell] = f_->is_product_form() ? product_cell(cell) : chain_cell(cell);
            have_[cell] = 1;
        }
        return cache_[cell];
    }

    GridOpenSet preimage(const GridOpenSet& u) {
        if (u.resolution() != n_) throw std::invalid_argument("grid resolution mismatch");
        GridOpenSet out(n_);
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i) {
                if (!u.member(i, j)) continue;
                for (int c : cell_preimages(j * n_ + i)) out.insert(c % n_, c / n_);
            }
        return out;
    }

private:
    // Per-axis cover for product form: for every sub-interval of the unit
    // circle, the cells met by every inverse branch.
    void build_axis_cover(const CircleMap& fac, std::vector<std::vector<int>>& cover) {
        const int m = n_ * g_;
        cover.assign(m, {});
        const double flo = fac.lift(0.0), fhi = fac.lift(1.0);
        auto inv = [&](double target) {
            return fac.invert_lift(std::clamp(target, flo, fhi));
        };
        for (int s = 0; s < m; ++s) {
            const double t0 = (double)s / m, t1 = (double)(s + 1) / m;
            for (long long j = (long long)std::floor(flo - t1) - 1;
                 j <= (long long)std::ceil(fhi - t0) + 1; ++j) {
                const double lo = t0 + (double)j, hi = t1 + (double)j;
                if (hi <= flo || lo >= fhi) continue;
                detail::cover_cells(inv(lo), inv(hi), n_, cover[s]);
            }
            std::sort(cover[s].begin(), cover[s].end());
            cover[s].erase(std::unique(cover[s].begin(), cover[s].end()), cover[s].end());
        }
    }

    std::vector<int> product_cell(int cell) {
        const int i = cell % n_, j = cell / n_;
        std::vector<int> cols, rows, out;
        for (int k = 0; k < g_; ++k) {
            for (int c : col_cover_[i * g_ + k]) cols.push_back(c);
            for (int r : row_cover_[j * g_ + k]) rows.push_back(r);
        }
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        for (int r : rows)
            for (int c : cols) out.push_back(r * n_ + c);
        return out;
    }

    const PlanePoint& corner_inverse(int ci, int cj) {
        const size_t m = (size_t)n_ * g_ + 1;
        PlanePoint& slot = corner_cache_[(size_t)cj * m + ci];
        if (std::isnan(slot.x)) {
            const double q = 1.0 / ((double)n_ * g_);
            slot = f_->chain_inverse({(double)ci * q, (double)cj * q});
        }
        return slot;
    }

    std::vector<int> chain_cell(int cell) {
        const int i = cell % n_, j = cell / n_;
        std::vector<int> out, xc, yc;
        for (int l = 0; l < g_; ++l)
            for (int k = 0; k < g_; ++k) {
                const PlanePoint z00 = corner_inverse(i * g_ + k, j * g_ + l);
                const PlanePoint z10 = corner_inverse(i * g_ + k + 1, j * g_ + l);
                const PlanePoint z01 = corner_inverse(i * g_ + k, j * g_ + l + 1);
                const PlanePoint z11 = corner_inverse(i * g_ + k + 1, j * g_ + l + 1);
                for (const IntVec& v : reps_) {
                    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
                    double y0 = x0, y1 = -x0;
                    for (const PlanePoint& z : {z00, z10, z01, z11}) {
                        const double wx = z.x + (double)v.x, wy = z.y + (double)v.y;
                        const double px = inv_[0][0] * wx + inv_[0][1] * wy;
                        const double py = inv_[1][0] * wx + inv_[1][1] * wy;
                        x0 = std::min(x0, px);
                        x1 = std::max(x1, px);
                        y0 = std::min(y0, py);
                        y1 = std::max(y1, py);
                    }
                    xc.clear();
                    yc.clear();
                    detail::cover_cells(x0, x1, n_, xc);
                    detail::cover_cells(y0, y1, n_, yc);
                    for (int cy : yc)
                        for (int cx : xc) out.push_back(cy * n_ + cx);
                }
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    const Endomorphism* f_;
    int n_, g_;
    std::vector<std::vector<int>> cache_;
    std::vector<std::uint8_t> have_;
    // product form
    std::vector<std::vector<int>> col_cover_, row_cover_;
    // chain form
    std::vector<PlanePoint> corner_cache_;
    std::vector<IntVec> reps_;
    double det_ = 1.0;
    double inv_[2][2] = {{1, 0}, {0, 1}};
};

inline GridOpenSet grid_preimage(const Endomorphism& f, const GridOpenSet& u, int subdiv = 2) {
    GridPreimageOracle oracle(f, u.resolution(), subdiv);
    return oracle.preimage(u);
}

// Forward counterpart via the sampled transition relation.
inline GridOpenSet grid_image(const Endomorphism& f, const GridOpenSet& u, int samples = 4) {
    const int n = u.resolution();
    const SymbolicImageGraph g = build_symbolic_image(f, n, samples);
    GridOpenSet out(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!u.member(i, j)) continue;
            for (int c : g.succ[(size_t)j * n + i]) out.insert(c % n, c / n);
        }
    return out;
}

enum class SetMatch { Exact, BoundaryLayer, Distinct };

// Compares a computed preimage against the set it should reproduce. Cells that
// differ only inside the one-cell band around either boundary are attributed
// to the outer estimate, not to genuine escape.
inline SetMatch invariance_match(const GridOpenSet& computed, const GridOpenSet& target) {
    if (computed == target) return SetMatch::Exact;
    const GridOpenSet diff = computed.symmetric_difference(target);
    const GridOpenSet band = boundary_band(target).set_union(boundary_band(computed));
    return diff.subset_of(band) ? SetMatch::BoundaryLayer : SetMatch::Distinct;
}

inline bool verify_strict_invariance(GridPreimageOracle& oracle, const GridOpenSet& u) {
    return oracle.preimage(u) == u;
}

enum class PairStatus { Found, Absent, Inconclusive };

struct InvariantPairResult {
    PairStatus status = PairStatus::Inconclusive;
    std::optional<GridOpenSet> inner, outer; // disjoint nonempty regular invariant sets
    SetMatch match_inner = SetMatch::Distinct, match_outer = SetMatch::Distinct;
    int iterations = 0; // growth steps of the successful (or last) saturation
    IntVec seed{-1, -1};
};

inline std::vector<IntVec> default_pair_seeds(int n) {
    return {{0, 0}, {n / 2, n / 2}, {n / 3, (2 * n) / 3}, {(3 * n) / 4, n / 4}};
}

// Searches for a pair of disjoint nonempty regular open sets that the map
// cannot mix: saturate a seed cell under repeated preimage; if the closure
// stalls short of covering the torus, regularize the saturation and take its
// exterior as the complementary set, then confirm both behave invariantly
// under the preimage oracle. All seeds saturating the whole torus is the
// expected signature of a transitive map.
inline InvariantPairResult find_invariant_pair(const Endomorphism& f, int n,
                                               std::vector<IntVec> seeds = {}, int max_iter = 64,
                                               int subdiv = 2) {
    if (seeds.empty()) seeds = default_pair_seeds(n);
    GridPreimageOracle oracle(f, n, subdiv);
    InvariantPairResult result;
    bool all_saturated = true;

    for (const IntVec& seed : seeds) {
        GridOpenSet u(n);
        u.insert((int)seed.x, (int)seed.y);
        int growth = 0;
        bool stalled = false;
        for (int it = 0; it < max_iter; ++it) {
            const GridOpenSet next = u.set_union(oracle.preimage(u));
            if (next == u) {
                stalled = true;
                break;
            }
            u = next;
            ++growth;
        }
        result.iterations = growth;
        result.seed = seed;
        if (!stalled) {
            all_saturated = false;
            continue;
        }
        const GridOpenSet outer = perp(u);
        if (outer.empty()) continue; // seed blanketed the torus
        const GridOpenSet inner = regularize(u);
        all_saturated = false;
        const SetMatch mi = invariance_match(oracle.preimage(inner), inner);
        const SetMatch mo = invariance_match(oracle.preimage(outer), outer);
        if (!inner.empty() && mi != SetMatch::Distinct && mo != SetMatch::Distinct) {
            result.status = PairStatus::Found;
            result.inner = inner;
            result.outer = outer;
            result.match_inner = mi;
            result.match_outer = mo;
            return result;
        }
    }
    result.status = all_saturated ? PairStatus::Absent : PairStatus::Inconclusive;
    return result;
}

struct OrbitCoverage {
    long long steps = 0;
    size_t cells_visited = 0;
    double fraction = 0.0;
    bool exact = false; // integer arithmetic, no floating drift
};

namespace detail {

// Large primes with verified large multiplicative order of small integers;
// orbits of affine maps over Z/p stay uncorrelated with the cell grid.
inline constexpr long long kOrbitPrimeX = 2305843009213691579LL;
inline constexpr long long kOrbitPrimeY = 2305843009213690799LL;

inline long long mod_cell(long long num, long long p, int n) {
    return (long long)((__int128)num * n / p);
}

struct AffineForm {
    IntMatrix2 a;
    double s = 0.0, t = 0.0;
};

inline std::optional<AffineForm> affine_form(const Endomorphism& f) {
    if (!f.affine()) return std::nullopt;
    AffineForm out;
    out.a = f.linear();
    for (const auto& prim : f.chain()) {
        const auto& tr = std::get<Translate>(prim);
        out.s += tr.s;
        out.t += tr.t;
    }
    return out;
}

} // namespace detail

// Fraction of grid cells visited by the forward orbit. Affine maps are
// iterated exactly over Z/p for a huge prime p (per-axis primes when the axes
// do not couple), so million-step orbits carry no roundoff; everything else
// runs in doubles.
inline OrbitCoverage orbit_coverage(const Endomorphism& f, const TorusPoint& start, long long steps,
                                    int n) {
    if (steps < 0 || n < 1) throw std::invalid_argument("orbit coverage needs steps >= 0, n >= 1");
    OrbitCoverage out;
    out.steps = steps;
    std::vector<std::uint8_t> seen((size_t)n * n, 0);
    size_t visited = 0;
    auto mark = [&](int i, int j) {
        std::uint8_t& b = seen[(size_t)j * n + i];
        if (!b) {
            b = 1;
            ++visited;
        }
    };

    const auto aff = detail::affine_form(f);
    if (aff) {
        const bool diagonal = aff->a.b == 0 && aff->a.c == 0;
        const long long px = detail::kOrbitPrimeX;
        const long long py = diagonal ? detail::kOrbitPrimeY : detail::kOrbitPrimeX;
        auto norm = [](long long v, long long p) {
            v %= p;
            return v < 0 ? v + p : v;
        };
        long long nx = norm(std::llrint(start.x * (double)px), px);
        long long ny = norm(std::llrint(start.y * (double)py), py);
        const long long sx = norm(std::llrint(aff->s * (double)px), px);
        const long long sy = norm(std::llrint(aff->t * (double)py), py);
        for (long long k = 0; k <= steps; ++k) {
            mark((int)detail::mod_cell(nx, px, n), (int)detail::mod_cell(ny, py, n));
            const long long nx2 =
                (long long)(((__int128)aff->a.a * nx + (__int128)aff->a.b * ny + sx) % px);
            const long long ny2 =
                (long long)(((__int128)aff->a.c * nx + (__int128)aff->a.d * ny + sy) % py);
            nx = norm(nx2, px);
            ny = norm(ny2, py);
        }
        out.exact = true;
    } else {
        TorusPoint p = start;
        for (long long k = 0; k <= steps; ++k) {
            mark(std::min(n - 1, (int)(p.x * n)), std::min(n - 1, (int)(p.y * n)));
            p = f.eval(p);
        }
    }
    out.cells_visited = visited;
    out.fraction = (double)visited / ((double)n * (double)n);
    return out;
}

// Cycle length of the component carousel: the image of each component's first
// cell center decides which component comes next. 0 when an image center
// escapes the listed components.
inline int component_period(const Endomorphism& f, const std::vector<GridOpenSet>& comps,
                            int start_index = 0) {
    if (comps.empty()) throw std::invalid_argument("component period of an empty list");
    const int n = comps.front().resolution();
    auto locate = [&](const TorusPoint& p) {
        const int i = std::min(n - 1, (int)(p.x * n));
        const int j = std::min(n - 1, (int)(p.y * n));
        for (size_t c = 0; c < comps.size(); ++c)
            if (comps[c].member(i, j)) return (int)c;
        return -1;
    };
    std::vector<int> nxt(comps.size(), -1);
    for (size_t c = 0; c < comps.size(); ++c) {
        const IntVec cell = comps[c].cells().front();
        const TorusPoint center{((double)cell.x + 0.5) / n, ((double)cell.y + 0.5) / n};
        nxt[c] = locate(f.eval(center));
    }
    int cur = start_index, period = 0;
    for (size_t hop = 0; hop <= comps.size(); ++hop) {
        if (nxt[cur] < 0) return 0;
        cur = nxt[cur];
        ++period;
        if (cur == start_index) return period;
    }
    return 0; // start never revisited: it sits on a tail, not a cycle
}

struct SheetCount {
    int count = 0;
    bool ambiguous = false;
};

// Number of n-step preimages of q that lie in the given set. Membership is
// probed with a small displacement in each direction; disagreement marks the
// query ambiguous so the caller can resample instead of trusting a point that
// sits numerically on the set boundary.
inline SheetCount sheet_count_on_set(const Endomorphism& f, const TorusPoint& q,
                                     const GridOpenSet& set, int iterations) {
    if (iterations < 1) throw std::invalid_argument("sheet count needs >= 1 iterations");
    const int n = set.resolution();
    const double delta = 1e-9;
    auto member = [&](double x, double y) {
        const TorusPoint p = project({x, y});
        return set.member(std::min(n - 1, (int)(p.x * n)), std::min(n - 1, (int)(p.y * n)));
    };
    std::vector<TorusPoint> layer = {q};
    for (int it = 0; it < iterations; ++it) {
        std::vector<TorusPoint> next;
        for (const TorusPoint& p : layer)
            for (const TorusPoint& r : f.preimages_numeric(p)) next.push_back(r);
        layer = std::move(next);
    }
    SheetCount out;
    for (const TorusPoint& p : layer) {
        const bool m = member(p.x, p.y);
        if (member(p.x + delta, p.y) != m || member(p.x - delta, p.y) != m ||
            member(p.x, p.y + delta) != m || member(p.x, p.y - delta) != m)
            out.ambiguous = true;
        if (m) ++out.count;
    }
    return out;
}

} // namespace toruslab
