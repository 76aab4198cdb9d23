#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "toruslab/matrix.hpp"

namespace toruslab {

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

// Point of the unit torus, coordinates always in [0, 1).
struct TorusPoint {
    double x = 0.0;
    double y = 0.0;

    PlanePoint lift() const { return {x, y}; }

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

namespace detail {

inline double wrap_unit(double v) {
    double w = v - std::floor(v);
    // v == -1e-17 style inputs round to exactly 1.0 after the subtraction.
    if (w >= 1.0) w = 0.0;
    return w;
}

} // namespace detail

inline TorusPoint project(const PlanePoint& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("project requires finite coordinates");
    return {detail::wrap_unit(p.x), detail::wrap_unit(p.y)};
}

inline PlanePoint deck_translate(const PlanePoint& p, const IntVec& v) {
    return {p.x + (double)v.x, p.y + (double)v.y};
}

// Quotient metric: min over the nine nearest deck translates. Always <= sqrt(2)/2.
inline double torus_distance(const TorusPoint& p, const TorusPoint& q) {
    double best = std::numeric_limits<double>::infinity();
    for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
            const double ex = p.x - q.x + dx;
            const double ey = p.y - q.y + dy;
            best = std::min(best, std::hypot(ex, ey));
        }
    }
    return best;
}

} // namespace toruslab
