#ifndef JENSENLAB_ORTHOGONALITY_HPP
#define JENSENLAB_ORTHOGONALITY_HPP

#include "jensenlab/random.hpp"
#include "jensenlab/space.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jensenlab {

/// λ-grid for the Birkhoff–James test: 0 plus log-spaced magnitudes on each
/// side of the origin, out to lambda_min and lambda_max.
struct LambdaGrid {
    double lambda_min = -1e4;
    double lambda_max = 1e4;
    int steps = 4096;

    void validate() const {
        if (!(lambda_min < 0.0 && 0.0 < lambda_max)) throw std::invalid_argument("lambda grid must straddle 0");
        if (steps < 1000) throw std::invalid_argument("lambda grid needs at least 1000 steps");
    }

    [[nodiscard]] LambdaGrid scaled(double factor) const {
        return {lambda_min * factor, lambda_max * factor, steps};
    }

    [[nodiscard]] std::vector<double> points() const {
        validate();
        const int per_side = (steps - 1) / 2;
        const double widest = std::max(-lambda_min, lambda_max);
        const double smallest = widest * 1e-10;
        std::vector<double> pts;
        pts.reserve(static_cast<std::size_t>(2 * per_side + 1));
        auto side = [&](double extent, double sign) {
            std::vector<double> out;
            const double lo = std::log(std::min(smallest, extent));
            const double hi = std::log(extent);
            for (int i = 0; i < per_side; ++i) {
                const double u = per_side == 1 ? 1.0 : static_cast<double>(i) / (per_side - 1);
                out.push_back(sign * std::exp(lo + u * (hi - lo)));
            }
            return out;
        };
        auto neg = side(-lambda_min, -1.0);
        for (auto it = neg.rbegin(); it != neg.rend(); ++it) pts.push_back(*it);
        pts.push_back(0.0);
        for (double v : side(lambda_max, 1.0)) pts.push_back(v);
        return pts;
    }
};

enum class RelationKind { trivial, inner_product, birkhoff_james };

inline std::string to_string(RelationKind k) {
    switch (k) {
        case RelationKind::trivial: return "trivial";
        case RelationKind::inner_product: return "inner";
        case RelationKind::birkhoff_james: return "bj";
    }
    return "?";
}

inline RelationKind relation_from_string(const std::string& s) {
    if (s == "trivial") return RelationKind::trivial;
    if (s == "inner" || s == "inner_product") return RelationKind::inner_product;
    if (s == "bj" || s == "birkhoff_james") return RelationKind::birkhoff_james;
    throw std::invalid_argument("unknown orthogonality relation '" + s + "'");
}

struct OrthogonalityRelation {
    RelationKind kind = RelationKind::inner_product;
    std::optional<LambdaGrid> bj_grid;  // required for birkhoff_james
    double tolerance = 1e-9;

    static OrthogonalityRelation trivial() { return {RelationKind::trivial, std::nullopt, 1e-9}; }
    static OrthogonalityRelation inner_product(double tol = 1e-9) { return {RelationKind::inner_product, std::nullopt, tol}; }
    static OrthogonalityRelation birkhoff_james(LambdaGrid grid = {}, double tol = 1e-9) {
        return {RelationKind::birkhoff_james, grid, tol};
    }
};

namespace detail {

/// Golden-section minimisation of a convex function on [a, b].
template <class Fn>
double golden_min(const Fn& fn, double a, double b, int iterations = 200) {
    constexpr double invphi = 0.6180339887498948482;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int i = 0; i < iterations && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = fn(d);
        }
    }
    return std::min({fc, fd, fn(a), fn(b)});
}

}  // namespace detail

/// min over λ of ‖x + λy‖ − ‖x‖, searched on the grid and refined by golden
/// section between the neighbours of the best grid point (λ ↦ ‖x + λy‖ is
/// convex).
inline double bj_margin(const NormedSpace& space, const Vector& x, const Vector& y, const LambdaGrid& grid = {}) {
    require_dim(space, x, "x");
    require_dim(space, y, "y");
    const auto pts = grid.points();
    if (pts.empty()) throw std::invalid_argument("empty lambda grid");
    const double nx = norm(space, x);
    auto value = [&](double lambda) { return norm(space, x + lambda * y); };

    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double v = value(pts[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = pts[best == 0 ? 0 : best - 1];
    const double hi = pts[best + 1 < pts.size() ? best + 1 : best];
    if (hi > lo) best_val = std::min(best_val, detail::golden_min(value, lo, hi));
    return best_val - nx;
}

inline bool is_orthogonal(const OrthogonalityRelation& rel, const NormedSpace& space, const Vector& x, const Vector& y) {
    require_dim(space, x, "x");
    require_dim(space, y, "y");
    switch (rel.kind) {
        case RelationKind::trivial:
            if (is_zero(x) || is_zero(y)) return true;
            return linearly_independent(x, y);
        case RelationKind::inner_product: {
            if (!space.has_inner_product())
                throw std::invalid_argument("inner-product orthogonality needs an inner product space");
            if (is_zero(x) || is_zero(y)) return true;
            return std::abs(inner(space, x, y)) <= rel.tolerance * norm(space, x) * norm(space, y);
        }
        case RelationKind::birkhoff_james:
            if (!rel.bj_grid) throw std::invalid_argument("Birkhoff-James relation requires a lambda grid");
            return bj_margin(space, x, y, *rel.bj_grid) >= -rel.tolerance;
    }
    return false;
}

/// Turns v into a vector orthogonal to x under the relation:
/// inner product → Euclidean projection; Birkhoff–James → v − F(v)/‖x‖·x for a
/// norming functional F of x (James' characterisation); trivial → v itself.
inline Vector orthogonal_partner(RelationKind kind, const NormedSpace& space, const Vector& x, const Vector& v) {
    if (is_zero(x)) return v;
    switch (kind) {
        case RelationKind::trivial: return v;
        case RelationKind::inner_product: return v - (x.dot(v) / x.squaredNorm()) * x;
        case RelationKind::birkhoff_james: {
            const Vector f = norming_functional(space, x);
            return v - (f.dot(v) / f.dot(x)) * x;
        }
    }
    return v;
}

/// Orthonormal frame (q1, q2) of span{p1, p2}, orientation preserved.
inline std::pair<Vector, Vector> plane_frame(const Vector& p1, const Vector& p2) {
    if (pair_rank(p1, p2) < 2) throw std::invalid_argument("degenerate plane: spanning vectors are dependent");
    Vector q1 = p1.normalized();
    Vector q2 = p2 - q1.dot(p2) * q1;
    q2 -= q1.dot(q2) * q1;
    q2.normalize();
    return {q1, q2};
}

/// Witness for axiom (O4) in an inner product space: y0 ∈ P with ⟨x, y0⟩ = 0 and
/// ‖y0‖² = λ‖x‖², so that ⟨x + y0, λx − y0⟩ = 0. y0 is x rotated by +90° in the
/// orientation of the ordered basis (p1, p2), then scaled by √λ.
inline Vector o4_witness(const NormedSpace& space, const Vector& p1, const Vector& p2, const Vector& x, double lambda) {
    if (!space.has_inner_product()) throw std::invalid_argument("o4_witness needs an inner product space");
    require_dim(space, p1, "p1");
    require_dim(space, p2, "p2");
    require_dim(space, x, "x");
    if (!(lambda > 0.0)) throw std::invalid_argument("o4_witness needs lambda > 0");
    if (is_zero(x)) throw std::invalid_argument("o4_witness needs x != 0");
    const auto [q1, q2] = plane_frame(p1, p2);
    const double a = q1.dot(x);
    const double b = q2.dot(x);
    const Vector in_plane = a * q1 + b * q2;
    if ((x - in_plane).norm() > 1e-10 * x.norm()) throw std::invalid_argument("o4_witness: x is not in the plane P");
    return std::sqrt(lambda) * (-b * q1 + a * q2);
}

}  // namespace jensenlab

#endif  // JENSENLAB_ORTHOGONALITY_HPP
