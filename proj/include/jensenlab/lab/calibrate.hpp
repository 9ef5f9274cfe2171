#ifndef JENSENLAB_LAB_CALIBRATE_HPP
#define JENSENLAB_LAB_CALIBRATE_HPP

#include "jensenlab/lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace jensenlab::lab {

/// Perturbation whose Jensen defect stays within the control φ.
///
/// Constant φ = ε: bounded noise of amplitude ε/(r+s+t). Mixed
/// φ = ε + δ(‖x‖ᵖ + ‖y‖ᵖ): amplitude ε/(r+s+t) plus δ'‖x‖ᵖ with δ' = δ/K, where
/// K = max(r^{1−p}sᵖ + s, (r^{1−p}tᵖ + t)·w) bounds the power terms of the
/// defect (w = (s/t)ᵖ when φ is evaluated at (x, (t/s)y), else 1). The
/// asymptotic corollary uses noise decaying like 1/(1 + ‖x‖) instead.
inline PerturbationSpec calibrated_perturbation(TheoremId id, const JensenParams& params,
                                                const ControlFunctionSpec& control, std::uint64_t seed) {
    const double r = params.r, s = params.s, t = params.t;
    const double a = control.epsilon / params.sum();
    if (id == TheoremId::cor3_2) return a > 0.0 ? PerturbationSpec::decaying(a, seed) : PerturbationSpec::none();
    if (control.kind == ControlKind::mixed && control.delta > 0.0) {
        const double p = control.p;
        const bool punctured = id == TheoremId::prop4_1 || id == TheoremId::prop4_2;
        const double w = punctured ? std::pow(s / t, p) : 1.0;
        const double K = std::max(std::pow(r, 1.0 - p) * std::pow(s, p) + s, (std::pow(r, 1.0 - p) * std::pow(t, p) + t) * w);
        return PerturbationSpec::mixed(a, control.delta / K, p, seed);
    }
    return a > 0.0 ? PerturbationSpec::bounded(a, seed) : PerturbationSpec::none();
}

namespace detail {

inline NormedSpace random_space(SplitMix64& rng, int dmin, int dmax, bool euclidean_only = false) {
    const int dim = rng.uniform_int(dmin, dmax);
    if (euclidean_only) return NormedSpace::euclidean(dim);
    switch (rng.uniform_int(0, 2)) {
        case 0: return NormedSpace::euclidean(dim);
        case 1: return NormedSpace::sup(dim);
        default: return NormedSpace::p_norm(dim, 1.5);
    }
}

inline JensenParams random_params(SplitMix64& rng, int hi = 5) {
    return {rng.uniform_int(1, hi), rng.uniform_int(1, hi), rng.uniform_int(1, hi)};
}

}  // namespace detail

/// A valid configuration for the theorem with randomized space, parameters,
/// control and a calibrated perturbation; `count` sets the sampler size.
inline ExperimentConfig random_config(TheoremId id, std::uint64_t seed, int count = 200) {
    SplitMix64 rng(derive_seed(seed, 0xca11));
    ExperimentConfig c;
    c.theorem = id;
    c.space = detail::random_space(rng, 1, 4);
    c.codomain = detail::random_space(rng, 1, 3);
    c.params = detail::random_params(rng);
    c.linear_seed = derive_seed(seed, 0x11);
    c.sampler.count = count;
    c.sampler.seed = derive_seed(seed, 0x5a);
    c.pexider = rng.uniform01() < 0.5;
    if (id != TheoremId::thm3_1) c.domain = detail::default_domain(id);

    const double eps = rng.uniform(0.01, 1.0);
    const double delta = rng.uniform(0.0, 1.0);
    const double p = 0.25 * rng.uniform_int(0, 3);
    const bool mixed = rng.uniform01() < 0.5;
    c.control = mixed ? ControlFunctionSpec::mixed(eps, delta, p) : ControlFunctionSpec::constant(eps);

    switch (id) {
        case TheoremId::thm2_1:
        case TheoremId::prop4_1: break;
        case TheoremId::cor2_2:
            c.pexider = false;
            c.control = ControlFunctionSpec::mixed(rng.uniform(0.0, 1.0), delta, p);
            break;
        case TheoremId::thm3_1:
            c.pexider = false;
            c.control = ControlFunctionSpec::constant(eps);
            c.domain = DomainRestriction::exterior(std::exp(rng.uniform(std::log(0.1), std::log(10.0))));
            break;
        case TheoremId::cor3_2: {
            c.pexider = false;
            c.control = ControlFunctionSpec::constant(eps);
            ShellSpec sh;
            sh.edges = {1.0, 10.0, 100.0, 1000.0, 10000.0};
            sh.samples_per_shell = std::max(50, count / 2);
            sh.min_split = rng.uniform01() < 0.5 ? 0.0 : 0.25;
            sh.seed = derive_seed(seed, 0x5e);
            c.shells = sh;
            break;
        }
        case TheoremId::prop4_2: {
            c.pexider = true;
            c.linear = Matrix::Zero(c.codomain.dim, c.space.dim);
            Vector off(c.codomain.dim);
            for (int i = 0; i < off.size(); ++i) off[i] = rng.uniform(-2.0, 2.0);
            c.offset = off;
            break;
        }
        case TheoremId::thm4_3:
            c.pexider = false;
            c.control = ControlFunctionSpec::constant(eps);
            if (rng.uniform01() < 0.5) {
                Vector off(c.codomain.dim);
                for (int i = 0; i < off.size(); ++i) off[i] = rng.uniform(-1.0, 1.0);
                c.offset = off;
            }
            break;
        case TheoremId::thm5_2: {
            c.control = ControlFunctionSpec::constant(eps);
            c.sampler.radius_max = 10.0;
            const bool inner = rng.uniform01() < 0.6;
            if (inner) {
                c.space = detail::random_space(rng, 2, 4, true);
                c.domain = DomainRestriction::orthogonal(OrthogonalityRelation::inner_product());
                if (rng.uniform01() < 0.6) {
                    const int k = rng.uniform_int(1, 5);
                    c.params = {k, k, k};
                    Vector q(c.codomain.dim);
                    for (int i = 0; i < q.size(); ++i) q[i] = rng.uniform(-1.0, 1.0);
                    c.quadratic = q;
                }
            } else {
                c.space = rng.uniform01() < 0.5 ? NormedSpace::sup(rng.uniform_int(2, 3)) : NormedSpace::p_norm(2, 1.5);
                c.domain = DomainRestriction::orthogonal(OrthogonalityRelation::birkhoff_james());
            }
            break;
        }
        case TheoremId::thm6_1:
        case TheoremId::thm6_2: {
            c.pexider = false;
            c.control = ControlFunctionSpec::constant(0.0);
            c.space = detail::random_space(rng, 2, 4, true);
            c.domain = DomainRestriction::orthogonal(OrthogonalityRelation::inner_product());
            c.ball_radius = std::exp(rng.uniform(std::log(0.5), std::log(4.0)));
            if (id == TheoremId::thm6_1) {
                c.params = detail::random_params(rng, 4);
            } else {
                const int r = rng.uniform_int(1, 4);
                const int smin = static_cast<int>(std::floor(r / std::sqrt(2.0))) + 1;
                const int st = rng.uniform_int(smin, 5);
                c.params = {r, st, st};
            }
            if (c.params.r == c.params.s && c.params.s == c.params.t) {
                Vector q(c.codomain.dim);
                for (int i = 0; i < q.size(); ++i) q[i] = rng.uniform(-1.0, 1.0);
                c.quadratic = q;
            }
            c.perturbation = PerturbationSpec::none();
            c.validate();
            return c;
        }
    }
    c.perturbation = calibrated_perturbation(id, c.params, c.control, derive_seed(seed, 0x9e));
    c.validate();
    return c;
}

}  // namespace jensenlab::lab

#endif  // JENSENLAB_LAB_CALIBRATE_HPP
