#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "toruslab/matrix.hpp"
#include "toruslab/rng.hpp"

namespace toruslab {

// Open subset of the torus resolved on an N x N grid. Cell (i, j) stands for
// the open box (i/N, (i+1)/N) x (j/N, (j+1)/N) together with any open face it
// shares with an adjacent member cell. Indexing is x-column i, y-row j, both
// mod N; storage is row-major j * N + i.
class GridOpenSet {
public:
    explicit GridOpenSet(int n) : n_(n), bits_((size_t)n * (size_t)n, 0) {
        if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
    }

    int resolution() const { return n_; }
    size_t cell_count() const { return bits_.size(); }

    int wrap(int k) const {
        k %= n_;
        return k < 0 ? k + n_ : k;
    }

    bool member(int i, int j) const { return bits_[idx(i, j)] != 0; }
    void insert(int i, int j) { bits_[idx(i, j)] = 1; }
    void erase(int i, int j) { bits_[idx(i, j)] = 0; }

    size_t count() const { return (size_t)std::accumulate(bits_.begin(), bits_.end(), (long long)0); }
    bool empty() const { return count() == 0; }
    bool is_universe() const { return count() == bits_.size(); }

    bool operator==(const GridOpenSet& o) const { return n_ == o.n_ && bits_ == o.bits_; }
    bool operator!=(const GridOpenSet& o) const { return !(*this == o); }

    bool subset_of(const GridOpenSet& o) const {
        check_same(o);
        for (size_t k = 0; k < bits_.size(); ++k)
            if (bits_[k] && !o.bits_[k]) return false;
        return true;
    }

    GridOpenSet complement() const {
        GridOpenSet r(n_);
        for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] ^ 1;
        return r;
    }

    GridOpenSet set_union(const GridOpenSet& o) const {
        check_same(o);
        GridOpenSet r(n_);
        for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] | o.bits_[k];
        return r;
    }

    GridOpenSet set_intersect(const GridOpenSet& o) const {
        check_same(o);
        GridOpenSet r(n_);
        for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] & o.bits_[k];
        return r;
    }

    GridOpenSet set_difference(const GridOpenSet& o) const {
        check_same(o);
        GridOpenSet r(n_);
        for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] & (o.bits_[k] ^ 1);
        return r;
    }

    GridOpenSet symmetric_difference(const GridOpenSet& o) const {
        check_same(o);
        GridOpenSet r(n_);
        for (size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] ^ o.bits_[k];
        return r;
    }

    std::vector<IntVec> cells() const {
        std::vector<IntVec> out;
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i)
                if (bits_[(size_t)j * n_ + i]) out.push_back({i, j});
        return out;
    }

    static GridOpenSet universe(int n) {
        GridOpenSet r(n);
        std::fill(r.bits_.begin(), r.bits_.end(), (std::uint8_t)1);
        return r;
    }

    static GridOpenSet random(int n, Rng& rng, double density = 0.5) {
        GridOpenSet r(n);
        for (auto& b : r.bits_) b = rng.next_double() < density ? 1 : 0;
        return r;
    }

private:
    size_t idx(int i, int j) const { return (size_t)wrap(j) * n_ + wrap(i); }
    void check_same(const GridOpenSet& o) const {
        if (n_ != o.n_) throw std::invalid_argument("grid resolution mismatch");
    }

    int n_;
    std::vector<std::uint8_t> bits_;

    friend GridOpenSet closure8(const GridOpenSet&);
};

// Toroidal dilation by the 3 x 3 structuring element: the grid closure.
inline GridOpenSet closure8(const GridOpenSet& s) {
    const int n = s.resolution();
    GridOpenSet r(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!s.member(i, j)) continue;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) r.insert(i + di, j + dj);
        }
    return r;
}

// Exterior: every cell whose closed neighborhood misses the set. perp(perp(s))
// is the regularization; perp is idempotent after one regularization pass, so
// perp^3 == perp exactly at grid scale.
inline GridOpenSet perp(const GridOpenSet& s) { return closure8(s).complement(); }

inline GridOpenSet regularize(const GridOpenSet& s) { return perp(perp(s)); }

inline bool is_regular(const GridOpenSet& s) { return regularize(s) == s; }

// Cells within Chebyshev distance 1 of both the set and its complement; the
// grid thickening of the topological boundary.
inline GridOpenSet boundary_band(const GridOpenSet& s) {
    return closure8(s).set_intersect(closure8(s.complement()));
}

// Connected components under toroidal 4-adjacency, ordered by their smallest
// row-major cell.
inline std::vector<GridOpenSet> components(const GridOpenSet& s) {
    const int n = s.resolution();
    std::vector<int> label((size_t)n * n, -1);
    std::vector<GridOpenSet> out;
    for (int j0 = 0; j0 < n; ++j0)
        for (int i0 = 0; i0 < n; ++i0) {
            if (!s.member(i0, j0) || label[(size_t)j0 * n + i0] >= 0) continue;
            const int id = (int)out.size();
            out.emplace_back(n);
            std::queue<IntVec> q;
            q.push({i0, j0});
            label[(size_t)j0 * n + i0] = id;
            while (!q.empty()) {
                const IntVec c = q.front();
                q.pop();
                out[id].insert(c.x, c.y);
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int ni = s.wrap(c.x + di[k]), nj = s.wrap(c.y + dj[k]);
                    if (s.member(ni, nj) && label[(size_t)nj * n + ni] < 0) {
                        label[(size_t)nj * n + ni] = id;
                        q.push({ni, nj});
                    }
                }
            }
        }
    return out;
}

// Same subset of the torus on a grid refined by an integer factor.
inline GridOpenSet refine(const GridOpenSet& s, int factor) {
    if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
    const int n = s.resolution();
    GridOpenSet r(n * factor);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!s.member(i, j)) continue;
            for (int b = 0; b < factor; ++b)
                for (int a = 0; a < factor; ++a) r.insert(i * factor + a, j * factor + b);
        }
    return r;
}

enum class WindingKind { Elementary, Winding, Undetermined };

struct WindingVerdict {
    WindingKind kind = WindingKind::Undetermined;
    // Primitive generators of the lattice of deck translations joining the
    // lift to itself; one vector for a strip, two for a set whose lift is a
    // single connected sheet over the torus.
    std::vector<IntVec> directions;
};

namespace detail {

inline long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

// Reduces a list of lattice vectors to a basis in lower-triangular normal
// form: {(d1, 0)} or {(d1, 0), (k, d2)} with d1 > 0, d2 > 0, 0 <= k < d1.
inline std::vector<IntVec> lattice_basis(std::vector<IntVec> gens) {
    std::erase_if(gens, [](const IntVec& v) { return v.x == 0 && v.y == 0; });
    if (gens.empty()) return {};
    // Euclid on y-components: combine pairs until at most one generator keeps
    // a nonzero y.
    for (;;) {
        int first = -1, second = -1;
        for (int k = 0; k < (int)gens.size(); ++k)
            if (gens[k].y != 0) {
                if (first < 0)
                    first = k;
                else {
                    second = k;
                    break;
                }
            }
        if (second < 0) break;
        IntVec &u = gens[first], &v = gens[second];
        if (std::abs((long long)u.y) > std::abs((long long)v.y)) std::swap(u, v);
        const long long qq = v.y / u.y;
        v = {v.x - qq * u.x, v.y - qq * u.y};
        std::erase_if(gens, [](const IntVec& g) { return g.x == 0 && g.y == 0; });
        if (gens.empty()) return {};
    }
    IntVec row2{0, 0};
    long long d1 = 0;
    for (const IntVec& g : gens) {
        if (g.y != 0)
            row2 = g;
        else
            d1 = gcd_ll(d1, std::abs((long long)g.x));
    }
    std::vector<IntVec> basis;
    if (row2.y != 0) {
        if (row2.y < 0) row2 = {-row2.x, -row2.y};
        if (d1 > 0) row2.x = ((row2.x % d1) + d1) % d1;
        if (d1 > 0) basis.push_back({d1, 0});
        basis.push_back(row2);
    } else if (d1 > 0) {
        basis.push_back({d1, 0});
    }
    return basis;
}

inline IntVec primitive(const IntVec& v) {
    const long long g = gcd_ll(std::abs((long long)v.x), std::abs((long long)v.y));
    IntVec p = {v.x / g, v.y / g};
    if (p.x < 0 || (p.x == 0 && p.y < 0)) p = {-p.x, -p.y};
    return p;
}

} // namespace detail

// Classifies one connected component of a grid open set by the behavior of its
// lift in a (2w+1) x (2w+1) window of fundamental domains. S collects the deck
// translations v with |v|_inf <= w whose copy of the base cell lands in the
// same planar component. Empty S away from the window boundary certifies an
// elementary (bounded-lift) component; contact with the boundary leaves the
// verdict open at this window size.
inline WindingVerdict winding_class(const GridOpenSet& comp, int window_radius = 2) {
    if (comp.empty()) throw std::invalid_argument("winding_class on empty component");
    const int n = comp.resolution();
    const int w = window_radius;
    if (w < 1) throw std::invalid_argument("window radius must be >= 1");
    const int W = (2 * w + 1) * n;
    std::vector<int> label((size_t)W * W, -1);
    auto occupied = [&](int gi, int gj) { return comp.member(gi % n, gj % n); };

    // Planar 4-connected labeling of the whole window.
    int next_label = 0;
    std::vector<std::pair<int, int>> stack;
    for (int gj = 0; gj < W; ++gj)
        for (int gi = 0; gi < W; ++gi) {
            if (!occupied(gi, gj) || label[(size_t)gj * W + gi] >= 0) continue;
            const int id = next_label++;
            stack.push_back({gi, gj});
            label[(size_t)gj * W + gi] = id;
            while (!stack.empty()) {
                auto [ci, cj] = stack.back();
                stack.pop_back();
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int ni = ci + di[k], nj = cj + dj[k];
                    if (ni < 0 || nj < 0 || ni >= W || nj >= W) continue;
                    if (!occupied(ni, nj) || label[(size_t)nj * W + ni] >= 0) continue;
                    label[(size_t)nj * W + ni] = id;
                    stack.push_back({ni, nj});
                }
            }
        }

    const IntVec base = comp.cells().front();
    const int bi = (int)base.x + w * n, bj = (int)base.y + w * n;
    const int base_label = label[(size_t)bj * W + bi];

    std::vector<IntVec> joins;
    for (int vy = -w; vy <= w; ++vy)
        for (int vx = -w; vx <= w; ++vx) {
            if (vx == 0 && vy == 0) continue;
            const int ti = bi + vx * n, tj = bj + vy * n;
            if (label[(size_t)tj * W + ti] == base_label) joins.push_back({vx, vy});
        }

    WindingVerdict out;
    if (!joins.empty()) {
        out.kind = WindingKind::Winding;
        for (const IntVec& b : detail::lattice_basis(joins)) out.directions.push_back(detail::primitive(b));
        std::sort(out.directions.begin(), out.directions.end());
        out.directions.erase(std::unique(out.directions.begin(), out.directions.end()),
                             out.directions.end());
        return out;
    }

    // No join found; trustworthy only if the base component stays clear of the
    // window frame.
    bool touches = false;
    for (int k = 0; k < W && !touches; ++k)
        touches = label[(size_t)0 * W + k] == base_label || label[(size_t)(W - 1) * W + k] == base_label ||
                  label[(size_t)k * W + 0] == base_label || label[(size_t)k * W + (W - 1)] == base_label;
    out.kind = touches ? WindingKind::Undetermined : WindingKind::Elementary;
    return out;
}

// True when the base lift of the component encloses no complement cell inside
// the window: the complement is flooded 8-connectedly from the window frame,
// and any unreached complement cell adjacent to the base component is a hole.
inline bool simply_connected_lift_check(const GridOpenSet& comp, int window_radius = 2) {
    if (comp.empty()) throw std::invalid_argument("lift check on empty component");
    const int n = comp.resolution();
    const int w = window_radius;
    const int W = (2 * w + 1) * n;
    auto occupied = [&](int gi, int gj) { return comp.member(gi % n, gj % n); };

    std::vector<std::uint8_t> outside((size_t)W * W, 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int gi, int gj) {
        if (gi < 0 || gj < 0 || gi >= W || gj >= W) return;
        if (occupied(gi, gj) || outside[(size_t)gj * W + gi]) return;
        outside[(size_t)gj * W + gi] = 1;
        stack.push_back({gi, gj});
    };
    for (int k = 0; k < W; ++k) {
        push(k, 0);
        push(k, W - 1);
        push(0, k);
        push(W - 1, k);
    }
    while (!stack.empty()) {
        auto [ci, cj] = stack.back();
        stack.pop_back();
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) push(ci + di, cj + dj);
    }
    for (int gj = 1; gj < W - 1; ++gj)
        for (int gi = 1; gi < W - 1; ++gi)
            if (!occupied(gi, gj) && !outside[(size_t)gj * W + gi]) return false;
    return true;
}

} // namespace toruslab
