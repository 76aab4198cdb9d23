#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "toruslab/matrix.hpp"
#include "toruslab/rng.hpp"
#include "toruslab/torus.hpp"

namespace toruslab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr int kMaxHarmonics = 8;

// Smooth 1-periodic profile: sum_k s_k sin(2 pi k x) + c_k cos(2 pi k x),
// k = 1..K with K <= 8. The coefficient lists double as certificates: the l1
// sums below bound |phi'| and |phi''| everywhere, which is what the grid
// machinery needs from a map — not point samples, a global bound.
class TrigPoly {
public:
    TrigPoly() = default;
    TrigPoly(std::vector<double> sin_coeff, std::vector<double> cos_coeff)
        : sin_(std::move(sin_coeff)), cos_(std::move(cos_coeff)) {
        if (sin_.size() > kMaxHarmonics || cos_.size() > kMaxHarmonics)
            throw std::invalid_argument("trig profile limited to 8 harmonics");
        for (double v : sin_)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite trig coefficient");
        for (double v : cos_)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite trig coefficient");
    }

    static TrigPoly single_sin(double amplitude) { return TrigPoly({amplitude}, {}); }

    static TrigPoly single_sin(int harmonic, double amplitude) {
        if (harmonic < 1 || harmonic > kMaxHarmonics)
            throw std::invalid_argument("harmonic out of range");
        std::vector<double> s((size_t)harmonic, 0.0);
        s.back() = amplitude;
        return TrigPoly(s, {});
    }

    bool zero() const {
        for (double v : sin_)
            if (v != 0.0) return false;
        for (double v : cos_)
            if (v != 0.0) return false;
        return true;
    }

    double eval(double x) const {
        double acc = 0.0;
        for (size_t i = 0; i < sin_.size(); ++i) acc += sin_[i] * std::sin(kTwoPi * (double)(i + 1) * x);
        for (size_t i = 0; i < cos_.size(); ++i) acc += cos_[i] * std::cos(kTwoPi * (double)(i + 1) * x);
        return acc;
    }

    double derivative(double x) const {
        double acc = 0.0;
        for (size_t i = 0; i < sin_.size(); ++i)
            acc += sin_[i] * kTwoPi * (double)(i + 1) * std::cos(kTwoPi * (double)(i + 1) * x);
        for (size_t i = 0; i < cos_.size(); ++i)
            acc -= cos_[i] * kTwoPi * (double)(i + 1) * std::sin(kTwoPi * (double)(i + 1) * x);
        return acc;
    }

    // sup |phi'| <= sum 2 pi k (|s_k| + |c_k|)
    double derivative_bound() const {
        double acc = 0.0;
        for (size_t i = 0; i < sin_.size(); ++i) acc += std::abs(sin_[i]) * kTwoPi * (double)(i + 1);
        for (size_t i = 0; i < cos_.size(); ++i) acc += std::abs(cos_[i]) * kTwoPi * (double)(i + 1);
        return acc;
    }

    const std::vector<double>& sin_coeffs() const { return sin_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }

private:
    std::vector<double> sin_, cos_;
};

// Unit-Jacobian building blocks, each isotopic to the identity; their lifts
// commute with deck translations exactly.
struct HShear {
    TrigPoly profile; // (x, y) -> (x + profile(y), y)
};
struct VShear {
    TrigPoly profile; // (x, y) -> (x, y + profile(x))
};
struct Translate {
    double s = 0.0, t = 0.0;
};
using Primitive = std::variant<HShear, VShear, Translate>;

// Degree-k circle map given by its lift F(x) = k x + pert(x). Restricted to
// strictly increasing lifts: k >= 1 and k - pert.derivative_bound() > 0, so
// each of the k preimage branches is solvable by bisection on a monotone
// interval.
class CircleMap {
public:
    CircleMap() = default;
    CircleMap(int degree, TrigPoly pert) : degree_(degree), pert_(std::move(pert)) {
        if (degree_ < 1) throw std::invalid_argument("circle map degree must be >= 1");
        if (derivative_lower_bound() <= 0.0)
            throw std::invalid_argument("circle map lift is not certified strictly increasing");
    }

    int degree() const { return degree_; }
    const TrigPoly& perturbation() const { return pert_; }
    bool affine() const { return pert_.zero(); }

    double lift(double x) const { return (double)degree_ * x + pert_.eval(x); }
    double derivative(double x) const { return (double)degree_ + pert_.derivative(x); }
    double derivative_lower_bound() const { return (double)degree_ - pert_.derivative_bound(); }
    double derivative_upper_bound() const { return (double)degree_ + pert_.derivative_bound(); }

    // Solves lift(xi) = target for xi in [base, base + 1); exactly one solution
    // exists when target lies in [lift(base), lift(base) + degree). Endpoint
    // hits return the endpoint itself, so exact fixed points of the lift come
    // back exactly.
    double invert_lift(double target, double base = 0.0) const {
        double lo = base, hi = base + 1.0;
        double flo = lift(lo), fhi = lift(hi);
        if (target < flo || target > fhi)
            throw std::invalid_argument("circle map inversion target outside branch range");
        if (target == flo) return lo;
        if (target == fhi) return hi;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = lift(mid);
            if (fm == target) return mid;
            if (fm < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    // All preimages in [0, 1) of a point given by a lift coordinate in [0, 1).
    std::vector<double> preimages(double x_unit) const {
        std::vector<double> out;
        const double f0 = lift(0.0);
        // Branch targets x_unit + j landing in [lift(0), lift(0) + degree).
        const long long j_lo = (long long)std::floor(f0 - x_unit) - 1;
        for (long long j = j_lo; out.size() < (size_t)degree_ && j <= j_lo + degree_ + 2; ++j) {
            const double target = x_unit + (double)j;
            if (target < f0 || target >= f0 + (double)degree_) continue;
            double xi = invert_lift(target);
            if (xi >= 1.0) xi = 0.0;
            out.push_back(xi);
        }
        if ((long long)out.size() != degree_)
            throw std::logic_error("circle preimage branch count mismatch");
        return out;
    }

private:
    int degree_ = 1;
    TrigPoly pert_;
};

struct ProductMap {
    CircleMap f1, f2; // (x, y) -> (f1(x), f2(y))
};

// Entrywise bound matrix for a map differential: bound[i][j] >= sup |dF_i/dx_j|.
// Products of these bound compositions; row sums give per-axis Lipschitz
// constants in the max metric.
struct DerivBound {
    double m[2][2] = {{0, 0}, {0, 0}};

    static DerivBound abs(const IntMatrix2& a) {
        DerivBound b;
        b.m[0][0] = std::abs((double)a.a);
        b.m[0][1] = std::abs((double)a.b);
        b.m[1][0] = std::abs((double)a.c);
        b.m[1][1] = std::abs((double)a.d);
        return b;
    }

    static DerivBound identity() {
        DerivBound b;
        b.m[0][0] = b.m[1][1] = 1.0;
        return b;
    }

    DerivBound compose_after(const DerivBound& inner) const {
        DerivBound r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.m[i][j] = m[i][0] * inner.m[0][j] + m[i][1] * inner.m[1][j];
        return r;
    }

    double row_sum(int i) const { return m[i][0] + m[i][1]; }
    double sup_norm() const { return std::max(row_sum(0), row_sum(1)); }
};

struct ConservativityCheck {
    double max_deviation = 0.0;
    bool pass = false;
};

// A torus endomorphism in one of two shapes:
//   chain form:   f = P_m o ... o P_1 o A, integer matrix A followed by
//                 unit-Jacobian primitives — conservative by construction;
//   product form: f(x, y) = (f1(x), f2(y)) for circle maps f1, f2 — used for
//                 the non-conservative counterexample family.
// Lifts are pinned by the identity lift at the origin, so the equivariance
// lift(p + v) = lift(p) + A v holds exactly (up to floating error).
class Endomorphism {
public:
    static Endomorphism chain_form(const IntMatrix2& linear, std::vector<Primitive> chain) {
        if (linear.det() == 0)
            throw std::invalid_argument("endomorphism requires det != 0");
        Endomorphism f;
        f.linear_ = linear;
        f.chain_ = std::move(chain);
        f.conservative_ = true;
        return f;
    }

    static Endomorphism linear_form(const IntMatrix2& linear) { return chain_form(linear, {}); }

    static Endomorphism product_form(ProductMap p) {
        Endomorphism f;
        f.linear_ = {p.f1.degree(), 0, 0, p.f2.degree()};
        f.product_ = std::move(p);
        f.conservative_ = false;
        return f;
    }

    const IntMatrix2& linear() const { return linear_; }
    const std::vector<Primitive>& chain() const { return chain_; }
    bool conservative() const { return conservative_; }
    bool is_product_form() const { return product_.has_value(); }
    const ProductMap& product() const {
        if (!product_) throw std::logic_error("not a product-form endomorphism");
        return *product_;
    }

    long long degree() const { return linear_.degree(); }

    // True when evaluation involves no transcendental terms; such maps are
    // iterated exactly by the orbit machinery.
    bool affine() const {
        if (product_) return product_->f1.affine() && product_->f2.affine();
        for (const auto& p : chain_)
            if (!std::holds_alternative<Translate>(p)) return false;
        return true;
    }

    PlanePoint lift_eval(const PlanePoint& p) const {
        if (product_)
            return {product_->f1.lift(p.x), product_->f2.lift(p.y)};
        PlanePoint z = {(double)linear_.a * p.x + (double)linear_.b * p.y,
                        (double)linear_.c * p.x + (double)linear_.d * p.y};
        for (const auto& prim : chain_) z = apply_primitive(prim, z);
        return z;
    }

    TorusPoint eval(const TorusPoint& p) const { return project(lift_eval(p.lift())); }

    // Closed-form preimages through the inverted chain; exactly degree()
    // points. Product-form preimages go through per-factor bisection instead
    // (preimages_numeric), so this path rejects them.
    std::vector<TorusPoint> preimages(const TorusPoint& q) const {
        if (product_)
            throw std::invalid_argument(
                "preimages: product form uses per-factor root finding (preimages_numeric)");
        PlanePoint z = q.lift();
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) z = invert_primitive(*it, z);
        const IntMatrix2 adj = linear_.adjugate();
        const double det = (double)linear_.det();
        std::vector<TorusPoint> out;
        for (const IntVec& v : coset_representatives(linear_)) {
            const double wx = z.x + (double)v.x;
            const double wy = z.y + (double)v.y;
            out.push_back(project({((double)adj.a * wx + (double)adj.b * wy) / det,
                                   ((double)adj.c * wx + (double)adj.d * wy) / det}));
        }
        return out;
    }

    // Preimages for either form. Product branches are the bisection solutions
    // of the two monotone factor lifts.
    std::vector<TorusPoint> preimages_numeric(const TorusPoint& q) const {
        if (!product_) return preimages(q);
        std::vector<TorusPoint> out;
        for (double xs : product_->f1.preimages(q.x))
            for (double ys : product_->f2.preimages(q.y)) out.push_back({xs, ys});
        return out;
    }

    double jacobian_det(const TorusPoint& p) const {
        if (product_)
            return product_->f1.derivative(p.x) * product_->f2.derivative(p.y);
        // Primitives all have unit Jacobian, so the chain rule collapses to
        // det A exactly; no matrix product roundoff enters.
        return (double)linear_.det();
    }

    // Certified entrywise bound on |Df| over the whole torus.
    DerivBound derivative_bound() const {
        if (product_) {
            DerivBound b;
            b.m[0][0] = product_->f1.derivative_upper_bound();
            b.m[1][1] = product_->f2.derivative_upper_bound();
            return b;
        }
        DerivBound b = DerivBound::abs(linear_);
        for (const auto& prim : chain_) b = primitive_bound(prim).compose_after(b);
        return b;
    }

    // Certified entrywise bound on the differential of any local inverse
    // branch: f^{-1} = A^{-1} o P_1^{-1} o ... o P_m^{-1}.
    DerivBound inverse_branch_bound() const {
        if (product_) {
            DerivBound b;
            b.m[0][0] = 1.0 / product_->f1.derivative_lower_bound();
            b.m[1][1] = 1.0 / product_->f2.derivative_lower_bound();
            return b;
        }
        DerivBound adj = DerivBound::abs(linear_.adjugate());
        const double inv_det = 1.0 / std::abs((double)linear_.det());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) adj.m[i][j] *= inv_det;
        DerivBound b = DerivBound::identity();
        for (const auto& prim : chain_) b = b.compose_after(primitive_bound(prim));
        return adj.compose_after(b);
    }

    // Applies the chain inverse only (no coset branches); the preimage set of
    // a lifted point z is { A^{-1}(chain_inverse(z) + v) : v coset reps }.
    PlanePoint chain_inverse(const PlanePoint& q) const {
        if (product_) throw std::logic_error("chain_inverse on product form");
        PlanePoint z = q;
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) z = invert_primitive(*it, z);
        return z;
    }

private:
    static PlanePoint apply_primitive(const Primitive& prim, const PlanePoint& p) {
        if (const auto* h = std::get_if<HShear>(&prim)) return {p.x + h->profile.eval(p.y), p.y};
        if (const auto* v = std::get_if<VShear>(&prim)) return {p.x, p.y + v->profile.eval(p.x)};
        const auto& t = std::get<Translate>(prim);
        return {p.x + t.s, p.y + t.t};
    }

    static PlanePoint invert_primitive(const Primitive& prim, const PlanePoint& p) {
        if (const auto* h = std::get_if<HShear>(&prim)) return {p.x - h->profile.eval(p.y), p.y};
        if (const auto* v = std::get_if<VShear>(&prim)) return {p.x, p.y - v->profile.eval(p.x)};
        const auto& t = std::get<Translate>(prim);
        return {p.x - t.s, p.y - t.t};
    }

    static DerivBound primitive_bound(const Primitive& prim) {
        DerivBound b = DerivBound::identity();
        if (const auto* h = std::get_if<HShear>(&prim)) b.m[0][1] = h->profile.derivative_bound();
        if (const auto* v = std::get_if<VShear>(&prim)) b.m[1][0] = v->profile.derivative_bound();
        return b;
    }

    IntMatrix2 linear_ = {1, 0, 0, 1};
    std::vector<Primitive> chain_;
    std::optional<ProductMap> product_;
    bool conservative_ = false;
};

// Empirical check of the conservativity identity: at seeded random points,
// sum 1/|det Df| over all preimages and compare to 1.
inline ConservativityCheck check_conservative(const Endomorphism& f, int samples, std::uint64_t seed,
                                              double tol) {
    if (samples <= 0) throw std::invalid_argument("check_conservative requires samples > 0");
    Rng rng = Rng(seed).split(0x636f6e73);
    ConservativityCheck out;
    for (int s = 0; s < samples; ++s) {
        const TorusPoint q{rng.next_double(), rng.next_double()};
        double acc = 0.0;
        for (const TorusPoint& p : f.preimages_numeric(q)) acc += 1.0 / std::abs(f.jacobian_det(p));
        out.max_deviation = std::max(out.max_deviation, std::abs(acc - 1.0));
    }
    out.pass = out.max_deviation <= tol;
    return out;
}

// Area-expanding yet non-transitive family: f(x, y) = (2x, y - eps sin(2 pi y)).
// The second factor has degree 1, fixes y = 0 with derivative 1 - 2 pi eps < 1,
// and the Jacobian is everywhere >= 2 (1 - 2 pi eps) > 1 for eps < 1/(4 pi).
inline Endomorphism make_counterexample(double eps) {
    constexpr double upper = 1.0 / (4.0 * std::numbers::pi);
    if (!(eps > 0.0 && eps < upper))
        throw std::invalid_argument("counterexample requires 0 < eps < 1/(4 pi), exclusive");
    return Endomorphism::product_form(
        {CircleMap(2, {}), CircleMap(1, TrigPoly::single_sin(-eps))});
}

// Degree-2 variant: f2(y) = 2y - eps sin(2 pi y) with eps in (1/(2 pi), 3/(4 pi)),
// so f2'(0) = 2 - 2 pi eps is in (1/2, 1): y = 0 attracts while the Jacobian
// stays above 1. attracting_radius reports the largest delta with f2(delta) = delta.
inline Endomorphism make_counterexample_degree2(double eps) {
    const double lo = 1.0 / (2.0 * std::numbers::pi);
    const double hi = 3.0 / (4.0 * std::numbers::pi);
    if (!(eps > lo && eps < hi))
        throw std::invalid_argument("degree-2 counterexample requires 1/(2 pi) < eps < 3/(4 pi)");
    return Endomorphism::product_form(
        {CircleMap(2, {}), CircleMap(2, TrigPoly::single_sin(-eps))});
}

inline double attracting_radius(const CircleMap& f2) {
    // Largest delta in (0, 1/2) with lift(delta) = delta; (-delta, delta) maps
    // into itself when the origin-fixed factor contracts there.
    double lo = 1e-9, hi = 0.5 - 1e-9;
    auto g = [&](double y) { return f2.lift(y) - y; };
    if (!(g(lo) < 0.0 && g(hi) > 0.0))
        throw std::invalid_argument("factor has no attracting interval at the origin");
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline Endomorphism make_preset(const std::string& name) {
    if (name == "example-2x-halfshift")
        return Endomorphism::chain_form({2, 0, 0, 1}, {Translate{0.0, 0.5}});
    if (name == "counterexample") return make_counterexample(0.05);
    if (name == "expanding-shear")
        return Endomorphism::chain_form({2, 0, 0, 2}, {HShear{TrigPoly::single_sin(0.1)}});
    throw std::invalid_argument("unknown endomorphism preset: " + name);
}

} // namespace toruslab
