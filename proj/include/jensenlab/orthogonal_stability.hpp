#ifndef JENSENLAB_ORTHOGONAL_STABILITY_HPP
#define JENSENLAB_ORTHOGONAL_STABILITY_HPP

#include "jensenlab/limits.hpp"
#include "jensenlab/restricted.hpp"
#include "jensenlab/sampling.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jensenlab {

/// Empirical sup of the defect over sampled orthogonal pairs.
template <class F, class G, class H>
double orthogonal_defect_sup(const F& f, const G& g, const H& h, const JensenParams& params,
                             const OrthogonalityRelation& rel, const NormedSpace& space, const NormedSpace& codomain,
                             const SamplerSpec& sampler) {
    if (rel.kind == RelationKind::inner_product && !space.has_inner_product())
        throw std::invalid_argument("inner-product relation needs an inner product space");
    return defect_sup(f, g, h, params, codomain, sample_pairs(DomainRestriction::orthogonal(rel), space, sampler, params));
}

/// Sup of ‖r f((sx + ty)/r) − r f((s/r)x) − r f((t/r)y)‖ over the given pairs.
template <class F>
double pexider_reduction_sup(const F& f, const JensenParams& params, const NormedSpace& codomain,
                             const std::vector<PointPair>& pairs) {
    const double r = params.r, s = params.s, t = params.t;
    double sup = 0.0;
    for (const auto& [x, y] : pairs) {
        const Vector v = r * f(Vector((s * x + t * y) / r)) - r * f(Vector((s / r) * x)) - r * f(Vector((t / r) * y));
        sup = std::max(sup, norm(codomain, v));
    }
    return sup;
}

template <class F>
double pexider_reduction_check(const F& f, const JensenParams& params, const DomainRestriction& domain,
                               const NormedSpace& space, const NormedSpace& codomain, const SamplerSpec& sampler) {
    return pexider_reduction_sup(f, params, codomain, sample_pairs(domain, space, sampler, params));
}

struct DecompositionResult {
    Mapping T_hat;
    Mapping Q_hat;                    // empty when no quadratic part is recovered
    Matrix T_matrix;                  // columns T̂(eᵢ)
    std::optional<RadialTable> b_hat;  // b̂ on [0, radius²]
    double max_residual = 0.0;
    bool converged = true;
    int max_iterations = 0;
    double max_last_gap = 0.0;
};

namespace detail {

inline Matrix basis_images(const Mapping& T, int dim, int codim) {
    Matrix m(codim, dim);
    for (int i = 0; i < dim; ++i) m.col(i) = T(Vector::Unit(dim, i));
    return m;
}

struct LimitStats {
    bool converged = true;
    int max_iterations = 0;
    double max_last_gap = 0.0;

    void add(const LimitEstimate& e) {
        converged = converged && e.converged;
        max_iterations = std::max(max_iterations, e.iterations);
        max_last_gap = std::max(max_last_gap, e.last_gap);
    }
};

}  // namespace detail

/// T̂ = dyadic limit of the odd part, Q̂ = quadratic limit of the even part;
/// max_residual = sup ‖f − T̂ − Q̂‖ over `points`.
template <class F>
DecompositionResult decompose_T_Q(const F& f, const NormedSpace& space, const NormedSpace& codomain,
                                  const std::vector<Vector>& points, const LimitSettings& limits = {}) {
    auto [odd, even] = odd_even_split(f);
    DecompositionResult out;
    out.T_hat = [odd = odd, codomain, limits](const Vector& x) { return dyadic_limit(odd, codomain, x, limits).value; };
    out.Q_hat = [even = even, codomain, limits](const Vector& x) { return quadratic_limit(even, codomain, x, limits).value; };
    detail::LimitStats stats;
    for (const auto& x : points) {
        const auto t = dyadic_limit(odd, codomain, x, limits);
        const auto q = quadratic_limit(even, codomain, x, limits);
        stats.add(t);
        stats.add(q);
        out.max_residual = std::max(out.max_residual, norm(codomain, f(x) - t.value - q.value));
    }
    out.T_matrix = detail::basis_images(out.T_hat, space.dim, codomain.dim);
    out.converged = stats.converged;
    out.max_iterations = stats.max_iterations;
    out.max_last_gap = stats.max_last_gap;
    return out;
}

/// Sup over `points` of ‖f((r/s)x) − (r/s)f(x)‖ and ‖f((r/t)x) − (r/t)f(x)‖.
/// Every argument must stay inside the open ball of the given radius.
template <class F>
double scaling_identity_check(const F& f, const NormedSpace& space, const NormedSpace& codomain,
                              const JensenParams& params, double ball_radius, const std::vector<Vector>& points) {
    params.validate();
    const double rs = static_cast<double>(params.r) / params.s;
    const double rt = static_cast<double>(params.r) / params.t;
    double sup = 0.0;
    for (const auto& x : points) {
        for (double k : {rs, rt}) {
            const Vector kx = k * x;
            if (!(norm(space, x) < ball_radius) || !(norm(space, kx) < ball_radius))
                throw std::domain_error("scaling identity argument escapes the ball");
            sup = std::max(sup, norm(codomain, f(kx) - k * f(x)));
        }
    }
    return sup;
}

/// Ball extension parameters: λ = s/r and base = 2λ² (requires s = t and base > 1).
struct SikorskaConfig {
    double ball_radius = 1.0;
    JensenParams params;
    bool exclude_origin = false;
    int table_size = 64;

    [[nodiscard]] double lambda() const { return static_cast<double>(params.s) / params.r; }
    [[nodiscard]] double base() const { return 2.0 * lambda() * lambda(); }

    void validate() const {
        params.validate();
        if (!(ball_radius > 0.0 && std::isfinite(ball_radius))) throw std::invalid_argument("ball radius must be > 0");
        if (params.s != params.t) throw std::invalid_argument("ball extension needs s = t");
        if (!(base() > 1.0)) throw std::invalid_argument("ball extension needs 2(s/r)^2 > 1, i.e. s = t > r/sqrt(2)");
        if (table_size < 2) throw std::invalid_argument("table_size must be >= 2");
    }

    /// ⌈40 / log₂ base⌉.
    [[nodiscard]] int n_max() const { return static_cast<int>(std::ceil(40.0 / std::log2(base()))); }

    [[nodiscard]] bool in_ball(const NormedSpace& space, const Vector& x) const {
        return norm(space, x) < ball_radius && !(exclude_origin && is_zero(x));
    }
};

namespace detail {

/// mult^n · g(base^-n · x), starting at the first n that puts base^-n·x in the
/// (punctured) ball and stopping once successive values agree to tol.
inline LimitEstimate ball_limit(const Mapping& g, const NormedSpace& space, const NormedSpace& codomain,
                                const SikorskaConfig& cfg, double mult, const Vector& x, double tol) {
    LimitEstimate est;
    if (is_zero(x)) {
        est.value = Vector::Zero(codomain.dim);
        est.converged = true;
        return est;
    }
    const double base = cfg.base();
    int n = 0;
    while (!cfg.in_ball(space, std::pow(base, -n) * x)) {
        if (++n > 4000) throw std::overflow_error("ball extension: argument too large");
    }
    auto term = [&](int k) -> Vector { return std::pow(mult, k) * g(Vector(std::pow(base, -k) * x)); };
    est.value = term(n);
    for (int k = n + 1; k <= n + cfg.n_max(); ++k) {
        Vector next = term(k);
        est.last_gap = norm(codomain, next - est.value);
        est.value = std::move(next);
        est.iterations = k - n;
        if (est.last_gap <= tol) {
            est.converged = true;
            return est;
        }
    }
    return est;
}

}  // namespace detail

/// Extends f from the (punctured) ball: T̂(x) = baseⁿ f°(base⁻ⁿx) and
/// Q̂(x) = (4λ²)ⁿ fᵉ((2λ²)⁻ⁿx); b̂(u) = Q̂(√u·e₁) tabulated on [0, R²].
/// max_residual = sup over `points` of ‖f(x) − T̂(x) − b̂(‖x‖²)‖.
template <class F>
DecompositionResult sikorska_extend(const F& f, const NormedSpace& space, const NormedSpace& codomain,
                                    const SikorskaConfig& cfg, const std::vector<Vector>& points,
                                    const LimitSettings& limits = {}) {
    cfg.validate();
    if (!space.has_inner_product()) throw std::invalid_argument("ball extension needs an inner product space");
    Mapping guarded = [f, space, cfg](const Vector& x) -> Vector {
        if (!cfg.in_ball(space, x)) throw std::domain_error("ball extension evaluated f outside its domain");
        return f(x);
    };
    auto [odd, even] = odd_even_split(guarded);
    const double lam2 = cfg.lambda() * cfg.lambda();
    const double tol = limits.tol;

    DecompositionResult out;
    out.T_hat = [odd = odd, space, codomain, cfg, tol](const Vector& x) {
        return detail::ball_limit(odd, space, codomain, cfg, cfg.base(), x, tol).value;
    };
    out.Q_hat = [even = even, space, codomain, cfg, tol, lam2](const Vector& x) {
        return detail::ball_limit(even, space, codomain, cfg, 4.0 * lam2, x, tol).value;
    };

    RadialTable b;
    Vector e1 = Vector::Zero(space.dim);
    e1[0] = 1.0;
    const double R2 = cfg.ball_radius * cfg.ball_radius;
    detail::LimitStats stats;
    for (int k = 0; k <= cfg.table_size; ++k) {
        const double u = R2 * k / cfg.table_size;
        b.knots.push_back(u);
        if (k == 0) {
            b.values.push_back(Vector::Zero(codomain.dim));
            continue;
        }
        const auto q = detail::ball_limit(even, space, codomain, cfg, 4.0 * lam2, Vector(std::sqrt(u) * e1), tol);
        stats.add(q);
        b.values.push_back(q.value);
    }

    for (const auto& x : points) {
        if (!cfg.in_ball(space, x)) throw std::domain_error("residual point outside the ball");
        const auto t = detail::ball_limit(odd, space, codomain, cfg, cfg.base(), x, tol);
        stats.add(t);
        out.max_residual = std::max(out.max_residual, norm(codomain, f(x) - t.value - b(squared_norm(space, x))));
    }
    out.T_matrix = detail::basis_images(out.T_hat, space.dim, codomain.dim);
    out.b_hat = std::move(b);
    out.converged = stats.converged;
    out.max_iterations = stats.max_iterations;
    out.max_last_gap = stats.max_last_gap;
    return out;
}

/// Sup of ‖f(x) − f(y₀)‖ where y₀ is the (O4) witness for x with λ = cfg.lambda()
/// in a random plane through x.
template <class F>
double even_part_constancy_check(const F& f_even, const NormedSpace& space, const NormedSpace& codomain,
                                 const SikorskaConfig& cfg, const std::vector<Vector>& points, std::uint64_t seed) {
    cfg.validate();
    SplitMix64 rng(derive_seed(seed, 0xe4));
    double sup = 0.0;
    for (const auto& x : points) {
        Vector v;
        do v = rng.normal_vector(space.dim);
        while (pair_rank(x, v) < 2);
        const Vector y0 = o4_witness(space, x, v, x, cfg.lambda());
        if (!cfg.in_ball(space, y0)) throw std::domain_error("(O4) witness leaves the ball");
        sup = std::max(sup, norm(codomain, f_even(x) - f_even(y0)));
    }
    return sup;
}

inline nlohmann::ordered_json to_json(const DecompositionResult& d) {
    nlohmann::ordered_json j;
    j["T_matrix"] = matrix_to_json(d.T_matrix);
    if (d.b_hat) {
        nlohmann::ordered_json b;
        b["u"] = d.b_hat->knots;
        auto vals = nlohmann::ordered_json::array();
        for (const auto& v : d.b_hat->values) vals.push_back(vector_to_json(v));
        b["values"] = vals;
        j["b_table"] = b;
    } else {
        j["b_table"] = nullptr;
    }
    j["max_residual"] = d.max_residual;
    j["converged"] = d.converged;
    j["max_iterations"] = d.max_iterations;
    j["max_last_gap"] = d.max_last_gap;
    return j;
}

}  // namespace jensenlab

#endif  // JENSENLAB_ORTHOGONAL_STABILITY_HPP
