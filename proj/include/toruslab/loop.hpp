#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "toruslab/endomorphism.hpp"
#include "toruslab/matrix.hpp"
#include "toruslab/torus.hpp"

namespace toruslab {

inline constexpr double kLoopEps = 1e-12;
inline constexpr double kClassIntegralityTol = 1e-9;

// Closed loop on the torus given by the vertices of one lift. The polyline
// must return to its start modulo Z^2; the integer displacement is the free
// homotopy class, which is all the intersection machinery ever needs.
class PolyLoop {
public:
    explicit PolyLoop(std::vector<PlanePoint> lift_vertices) : verts_(std::move(lift_vertices)) {
        if (verts_.size() < 2) throw std::invalid_argument("loop needs at least 2 vertices");
        const double dx = verts_.back().x - verts_.front().x;
        const double dy = verts_.back().y - verts_.front().y;
        const double rx = std::round(dx), ry = std::round(dy);
        if (std::abs(dx - rx) > kClassIntegralityTol || std::abs(dy - ry) > kClassIntegralityTol)
            throw std::invalid_argument("loop lift does not close up modulo the lattice");
        class_ = {(long long)rx, (long long)ry};
    }

    // Straight (a, b)-loop through a base point.
    static PolyLoop line(const TorusPoint& base, const IntVec& cls) {
        if (cls.x == 0 && cls.y == 0) throw std::invalid_argument("line loop needs a nonzero class");
        const PlanePoint p = base.lift();
        return PolyLoop({{p.x, p.y}, {p.x + (double)cls.x, p.y + (double)cls.y}});
    }

    const std::vector<PlanePoint>& lift_vertices() const { return verts_; }
    IntVec homotopy_class() const { return class_; }
    size_t edge_count() const { return verts_.size() - 1; }

    PolyLoop translated(const IntVec& v) const {
        std::vector<PlanePoint> out;
        out.reserve(verts_.size());
        for (const PlanePoint& p : verts_) out.push_back(deck_translate(p, v));
        return PolyLoop(std::move(out));
    }

    void bounding_box(double& x0, double& y0, double& x1, double& y1) const {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -std::numeric_limits<double>::infinity();
        for (const PlanePoint& p : verts_) {
            x0 = std::min(x0, p.x);
            y0 = std::min(y0, p.y);
            x1 = std::max(x1, p.x);
            y1 = std::max(y1, p.y);
        }
    }

private:
    std::vector<PlanePoint> verts_;
    IntVec class_;
};

namespace detail {

inline double cross3(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline bool on_segment(const PlanePoint& a, const PlanePoint& b, const PlanePoint& p, double eps) {
    if (std::abs(cross3(a, b, p)) > eps * (1.0 + std::abs(p.x) + std::abs(p.y))) return false;
    return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
           p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

// Segment intersection including endpoint and collinear-overlap contact.
inline bool segments_meet(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                          const PlanePoint& d, double eps) {
    const double d1 = cross3(c, d, a), d2 = cross3(c, d, b);
    const double d3 = cross3(a, b, c), d4 = cross3(a, b, d);
    if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
        ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
        return true;
    return on_segment(c, d, a, eps) || on_segment(c, d, b, eps) || on_segment(a, b, c, eps) ||
           on_segment(a, b, d, eps);
}

} // namespace detail

// Whether the torus projections of two loops share a point. Checked on lifts:
// the second loop is deck-translated through every offset that can bring its
// bounding box into contact with the first loop's, and segments are compared
// pairwise.
inline bool loops_intersect(const PolyLoop& a, const PolyLoop& b) {
    double ax0, ay0, ax1, ay1, bx0, by0, bx1, by1;
    a.bounding_box(ax0, ay0, ax1, ay1);
    b.bounding_box(bx0, by0, bx1, by1);
    const long long vx_lo = (long long)std::floor(ax0 - bx1 - kLoopEps);
    const long long vx_hi = (long long)std::ceil(ax1 - bx0 + kLoopEps);
    const long long vy_lo = (long long)std::floor(ay0 - by1 - kLoopEps);
    const long long vy_hi = (long long)std::ceil(ay1 - by0 + kLoopEps);
    const auto& va = a.lift_vertices();
    for (long long vx = vx_lo; vx <= vx_hi; ++vx)
        for (long long vy = vy_lo; vy <= vy_hi; ++vy) {
            std::vector<PlanePoint> vb;
            vb.reserve(b.lift_vertices().size());
            for (const PlanePoint& p : b.lift_vertices())
                vb.push_back({p.x + (double)vx, p.y + (double)vy});
            for (size_t i = 0; i + 1 < va.size(); ++i)
                for (size_t k = 0; k + 1 < vb.size(); ++k)
                    if (detail::segments_meet(va[i], va[i + 1], vb[k], vb[k + 1], kLoopEps)) return true;
        }
    return false;
}

namespace detail {

// Signed ray crossings of a closed planar polyline around q. Half-open edge
// convention, so vertices on the ray are counted once.
inline int planar_winding(const std::vector<PlanePoint>& verts, const PlanePoint& q) {
    int w = 0;
    for (size_t i = 0; i + 1 < verts.size(); ++i) {
        const PlanePoint &u = verts[i], &v = verts[i + 1];
        if (u.y <= q.y) {
            if (v.y > q.y && cross3(u, v, q) > 0.0) ++w;
        } else {
            if (v.y <= q.y && cross3(u, v, q) < 0.0) --w;
        }
    }
    return w;
}

} // namespace detail

// Winding number of a null-homotopic loop around a torus point: the sum of the
// planar winding numbers of one lift of the loop around every lattice copy of
// the point. Defined only for class (0, 0); points within kLoopEps of the loop
// are rejected.
inline int winding_number(const PolyLoop& loop, const TorusPoint& p) {
    if (!(loop.homotopy_class() == IntVec{0, 0}))
        throw std::invalid_argument("winding number needs a null-homotopic loop");
    double x0, y0, x1, y1;
    loop.bounding_box(x0, y0, x1, y1);
    const auto& verts = loop.lift_vertices();
    int total = 0;
    for (long long vx = (long long)std::floor(x0 - p.x) - 1; vx <= (long long)std::ceil(x1 - p.x) + 1;
         ++vx)
        for (long long vy = (long long)std::floor(y0 - p.y) - 1;
             vy <= (long long)std::ceil(y1 - p.y) + 1; ++vy) {
            const PlanePoint q{p.x + (double)vx, p.y + (double)vy};
            for (size_t i = 0; i + 1 < verts.size(); ++i)
                if (detail::on_segment(verts[i], verts[i + 1], q, kLoopEps))
                    throw std::invalid_argument("winding number undefined on the loop itself");
            total += detail::planar_winding(verts, q);
        }
    return total;
}

// Image loop under an endomorphism: each edge is subdivided and pushed through
// the lift. The class transforms by the linear part exactly, which makes this
// the workhorse for checking functoriality of classes numerically.
inline PolyLoop push_forward(const Endomorphism& f, const PolyLoop& loop, int subdivisions = 16) {
    if (subdivisions < 1) throw std::invalid_argument("subdivisions must be >= 1");
    const auto& verts = loop.lift_vertices();
    std::vector<PlanePoint> out;
    out.reserve((verts.size() - 1) * (size_t)subdivisions + 1);
    for (size_t i = 0; i + 1 < verts.size(); ++i)
        for (int k = 0; k < subdivisions; ++k) {
            const double t = (double)k / (double)subdivisions;
            out.push_back(f.lift_eval({verts[i].x + t * (verts[i + 1].x - verts[i].x),
                                       verts[i].y + t * (verts[i + 1].y - verts[i].y)}));
        }
    out.push_back(f.lift_eval(verts.back()));
    return PolyLoop(std::move(out));
}

} // namespace toruslab
