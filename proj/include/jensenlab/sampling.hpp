#ifndef JENSENLAB_SAMPLING_HPP
#define JENSENLAB_SAMPLING_HPP

#include "jensenlab/domain.hpp"
#include "jensenlab/function_model.hpp"
#include "jensenlab/random.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jensenlab {

struct SamplerSpec {
    int count = 1000;
    std::uint64_t seed = 0;
    double radius_min = 1e-3;
    double radius_max = 1e3;

    void validate() const {
        if (count < 1) throw std::invalid_argument("sampler count must be >= 1");
        if (!(radius_min > 0.0 && radius_max >= radius_min && std::isfinite(radius_max)))
            throw std::invalid_argument("sampler radius range must satisfy 0 < radius_min <= radius_max < inf");
    }
};

using PointPair = std::pair<Vector, Vector>;

/// `count` points with log-uniform radius in [radius_min, radius_max].
inline std::vector<Vector> sample_points(const NormedSpace& space, const SamplerSpec& sampler) {
    sampler.validate();
    SplitMix64 rng(derive_seed(sampler.seed, 0x70));
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(sampler.count));
    for (int i = 0; i < sampler.count; ++i) pts.push_back(random_point(space, rng, sampler.radius_min, sampler.radius_max));
    return pts;
}

/// Points strictly inside the ball of the given radius (and nonzero).
inline std::vector<Vector> sample_ball_points(const NormedSpace& space, double radius, int count, std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    SplitMix64 rng(derive_seed(seed, 0xb0));
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double rho = radius * std::sqrt(rng.uniform(1e-6, 0.98));
        pts.push_back(rho * random_direction(space, rng));
    }
    return pts;
}

namespace detail {

inline Vector with_norm(const NormedSpace& space, const Vector& v, double rho) { return (rho / norm(space, v)) * v; }

inline Vector orthogonal_y(const OrthogonalityRelation& rel, const NormedSpace& space, const Vector& x, SplitMix64& rng,
                           double rho) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vector y;
        switch (rel.kind) {
            case RelationKind::trivial: y = rng.normal_vector(space.dim); break;
            case RelationKind::inner_product: {
                const Vector v = rng.normal_vector(space.dim);
                if (pair_rank(x, v) < 2) continue;
                const double lambda = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
                y = o4_witness(space, x, v, x, lambda);
                break;
            }
            case RelationKind::birkhoff_james:
                y = orthogonal_partner(RelationKind::birkhoff_james, space, x, rng.normal_vector(space.dim));
                break;
        }
        if (is_zero(y)) continue;
        y = with_norm(space, y, rho);
        if (is_orthogonal(rel, space, x, y)) return y;
    }
    throw std::runtime_error("could not construct an orthogonal partner");
}

}  // namespace detail

/// Pairs inside the domain. Besides generic pairs the mixture contains the
/// structured pairs that the direct-method arguments substitute into the
/// hypothesis: (x, 0), (0, y), (x, ±x) and, on the punctured space,
/// (x, ±(s/t)x) and (3x, −(s/t)x).
inline std::vector<PointPair> sample_pairs(const DomainRestriction& dom, const NormedSpace& space,
                                           const SamplerSpec& sampler, const std::optional<JensenParams>& params = {}) {
    dom.validate();
    sampler.validate();
    if (dom.kind == DomainKind::orthogonal && space.dim < 2) throw std::invalid_argument("orthogonal sampling needs dim >= 2");
    SplitMix64 rng(derive_seed(sampler.seed, 0x9a));
    const double st = params ? static_cast<double>(params->s) / params->t : 1.0;
    const Vector zero = Vector::Zero(space.dim);
    auto point = [&] { return random_point(space, rng, sampler.radius_min, sampler.radius_max); };
    auto radius = [&] {
        return std::exp(rng.uniform(std::log(sampler.radius_min), std::log(sampler.radius_max)));
    };

    std::vector<PointPair> out;
    out.reserve(static_cast<std::size_t>(sampler.count));
    for (int i = 0; i < sampler.count; ++i) {
        const int slot = i % 8;
        PointPair pr;
        switch (dom.kind) {
            case DomainKind::full:
                switch (slot) {
                    case 4: pr = {point(), zero}; break;
                    case 5: pr = {zero, point()}; break;
                    case 6: { const Vector x = point(); pr = {x, x}; break; }
                    case 7: { const Vector x = point(); pr = {x, -x}; break; }
                    default: pr = {point(), point()};
                }
                break;
            case DomainKind::exterior: {
                switch (slot) {
                    case 4: pr = {point(), zero}; break;
                    case 5: pr = {zero, point()}; break;
                    case 6: { const Vector x = point(); pr = {x, x}; break; }
                    case 7: { const Vector x = point(); pr = {x, -x}; break; }
                    default: pr = {point(), point()};
                }
                const double total = norm(space, pr.first) + norm(space, pr.second);
                if (total < dom.d) {
                    const double k = dom.d * rng.uniform(1.0, 4.0) / total;
                    pr.first *= k;
                    pr.second *= k;
                }
                break;
            }
            case DomainKind::punctured:
                switch (slot) {
                    case 4: { const Vector x = point(); pr = {x, st * x}; break; }
                    case 5: { const Vector x = point(); pr = {x, -st * x}; break; }
                    case 6: { const Vector x = point(); pr = {3.0 * x, -st * x}; break; }
                    case 7: { const Vector x = point(); pr = {x, -x}; break; }
                    default: pr = {point(), point()};
                }
                break;
            case DomainKind::orthogonal: {
                const Vector x = point();
                switch (slot) {
                    case 4: pr = {x, zero}; break;
                    case 5: pr = {zero, x}; break;
                    default: pr = {x, detail::orthogonal_y(*dom.relation, space, x, rng, radius())};
                }
                break;
            }
        }
        out.push_back(std::move(pr));
    }
    return out;
}

/// Appends (x, 0) and (0, y) for every pair. Both lie in the full domain and,
/// by axiom (O1), in every orthogonal domain.
inline std::vector<PointPair> with_axis_companions(std::vector<PointPair> pairs) {
    const std::size_t n = pairs.size();
    pairs.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector zero = Vector::Zero(pairs[i].first.size());
        pairs.emplace_back(pairs[i].first, zero);
        pairs.emplace_back(zero, pairs[i].second);
    }
    return pairs;
}

/// Pairs with ‖x‖ + ‖y‖ < d: generic splits, one-sided pairs, ties ‖x‖ = ‖y‖,
/// and x = y = 0.
inline std::vector<PointPair> sample_interior_pairs(const NormedSpace& space, double d, int count, std::uint64_t seed) {
    if (!(d > 0.0)) throw std::invalid_argument("interior sampling needs d > 0");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    SplitMix64 rng(derive_seed(seed, 0x1a));
    const Vector zero = Vector::Zero(space.dim);
    std::vector<PointPair> out;
    out.reserve(static_cast<std::size_t>(count));
    out.emplace_back(zero, zero);
    for (int i = 1; i < count; ++i) {
        const double total = d * rng.uniform01() * (1.0 - 1e-12);
        const Vector u = random_direction(space, rng);
        const Vector v = random_direction(space, rng);
        switch (i % 6) {
            case 0: out.emplace_back(total * u, zero); break;
            case 1: out.emplace_back(zero, total * v); break;
            case 2: out.emplace_back(0.5 * total * u, 0.5 * total * v); break;
            default: {
                const double lam = rng.uniform01();
                out.emplace_back(lam * total * u, (1.0 - lam) * total * v);
            }
        }
    }
    return out;
}

}  // namespace jensenlab

#endif  // JENSENLAB_SAMPLING_HPP
