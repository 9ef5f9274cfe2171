#ifndef JENSENLAB_SERIES_HPP
#define JENSENLAB_SERIES_HPP

#include "jensenlab/control.hpp"
#include "jensenlab/function_model.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace jensenlab {

struct SeriesValue {
    double value = 0.0;
    int terms_used = 0;
    double tail_bound = 0.0;
    bool exact = false;
};

struct Truncation {
    int n_max = 400;
    double tol = 1e-14;  // relative to 1 + value
};

namespace detail {

/// One control evaluation φ(a·x, b·y) inside a series: scalar multipliers a and
/// b of the two series arguments plus the term's weight.
struct PhiTerm {
    double weight;
    double a;
    double b;
};

/// Σₙ base⁻ⁿ Σ_terms weight·φ(a·baseⁿ·x, b·baseⁿ·y), pre-multiplied by `prefactor`.
///
/// Constant and mixed controls are summed in closed form per power of base^(p−1);
/// table controls are summed termwise until the arguments are past the last
/// knot, after which the remaining terms shrink at least geometrically with
/// ratio base^(q−1).
template <std::size_t N>
SeriesValue control_series(const ControlFunctionSpec& spec, const NormedSpace& space, const Vector& x, const Vector& y,
                           double base, double prefactor, const std::array<PhiTerm, N>& terms, const Truncation& trunc) {
    spec.validate();
    spec.require_convergent();
    const double nx = norm(space, x), ny = norm(space, y);
    double weight_sum = 0.0;
    for (const auto& t : terms) weight_sum += t.weight;

    if (spec.kind != ControlKind::table) {
        // Σ base⁻ⁿ = base/(base−1); Σ base^{n(p−1)} = 1/(1 − base^{p−1})
        double value = prefactor * weight_sum * spec.epsilon * base / (base - 1.0);
        if (spec.kind == ControlKind::mixed && spec.delta != 0.0) {
            double radial = 0.0;
            for (const auto& t : terms)
                radial += t.weight * (power_or_zero(std::abs(t.a) * nx, spec.p) + power_or_zero(std::abs(t.b) * ny, spec.p));
            value += prefactor * spec.delta * radial / (1.0 - std::pow(base, spec.p - 1.0));
        }
        return {value, 0, 0.0, true};
    }

    const double ratio = std::pow(base, spec.q - 1.0);
    const double last_knot = spec.knots.back();
    double sum = 0.0, scale = 1.0, inv = 1.0;
    SeriesValue out;
    for (int n = 0; n < trunc.n_max; ++n) {
        double term = 0.0;
        bool past_knots = true;
        for (const auto& t : terms) {
            const double rx = std::abs(t.a) * scale * nx, ry = std::abs(t.b) * scale * ny;
            term += t.weight * (spec.epsilon + spec.radial(rx) + spec.radial(ry));
            if ((rx != 0.0 && rx < last_knot) || (ry != 0.0 && ry < last_knot)) past_knots = false;
        }
        term *= inv;
        sum += term;
        out.terms_used = n + 1;
        if (past_knots) {
            out.tail_bound = prefactor * term * ratio / (1.0 - ratio);
            if (out.tail_bound <= trunc.tol * (1.0 + prefactor * sum)) break;
        } else {
            out.tail_bound = std::numeric_limits<double>::infinity();
        }
        scale *= base;
        inv /= base;
    }
    out.value = prefactor * sum;
    out.exact = false;
    return out;
}

}  // namespace detail

/// φ̃(x, y) = (1/2r) Σₙ 2⁻ⁿ [φ(2ⁿ(r/s)x, 2ⁿ(r/t)y) + φ(2ⁿ(r/s)x, 0) + φ(0, 2ⁿ(r/t)y)].
inline SeriesValue phi_tilde_dyadic(const ControlFunctionSpec& spec, const NormedSpace& space, const Vector& x,
                                    const Vector& y, const JensenParams& params, const Truncation& trunc = {}) {
    params.validate();
    const double rs = static_cast<double>(params.r) / params.s;
    const double rt = static_cast<double>(params.r) / params.t;
    const std::array<detail::PhiTerm, 3> terms{{{1.0, rs, rt}, {1.0, rs, 0.0}, {1.0, 0.0, rt}}};
    return detail::control_series(spec, space, x, y, 2.0, 1.0 / (2.0 * params.r), terms, trunc);
}

/// φ̃(x, y) = (2/3) Σₙ 3⁻ⁿ [φ(3ⁿ⁺¹x/2, −3ⁿy/2) + ½φ(3ⁿ⁺¹x/2, 3ⁿ⁺¹y/2) + ½φ(3ⁿ⁺¹x/2, −3ⁿ⁺¹y/2)
///                        + ½φ(3ⁿx/2, 3ⁿy/2) + ½φ(3ⁿx/2, −3ⁿy/2)]
inline SeriesValue phi_tilde_triadic(const ControlFunctionSpec& spec, const NormedSpace& space, const Vector& x,
                                     const Vector& y, const Truncation& trunc = {}) {
    const std::array<detail::PhiTerm, 5> terms{{{1.0, 1.5, -0.5},
                                                {0.5, 1.5, 1.5},
                                                {0.5, 1.5, -1.5},
                                                {0.5, 0.5, 0.5},
                                                {0.5, 0.5, -0.5}}};
    return detail::control_series(spec, space, x, y, 3.0, 2.0 / 3.0, terms, trunc);
}

/// ψ(x) = (2/3)φ(3x/2, −x/2) + (1/3)φ(3x/2, 3x/2) + (1/3)φ(3x/2, −3x/2)
///        + (1/3)φ(x/2, x/2) + (1/3)φ(x/2, −x/2)
inline double psi_eval(const ControlFunctionSpec& spec, const NormedSpace& space, const Vector& x) {
    auto phi = [&](double a, double b) { return control_phi_eval(spec, space, a * x, b * x); };
    return (2.0 / 3.0) * phi(1.5, -0.5) + (1.0 / 3.0) * phi(1.5, 1.5) + (1.0 / 3.0) * phi(1.5, -1.5) +
           (1.0 / 3.0) * phi(0.5, 0.5) + (1.0 / 3.0) * phi(0.5, -0.5);
}

/// (3/r)ε + (1/r)[(r/s)ᵖ + (r/t)ᵖ] · 2δ‖x‖ᵖ / (1 − 2^{p−1}), with 0ᵖ := 0.
inline double cor22_bound(const JensenParams& params, double eps, double delta, double p, double xnorm) {
    params.validate();
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("cor22_bound: p must lie in [0, 1)");
    const double r = params.r;
    const double coeff = (std::pow(r / params.s, p) + std::pow(r / params.t, p)) / r;
    return 3.0 * eps / r + coeff * 2.0 * delta * power_or_zero(xnorm, p) / (1.0 - std::pow(2.0, p - 1.0));
}

inline double cor22_bound(const JensenParams& params, double eps, double delta, double p, const NormedSpace& space,
                          const Vector& x) {
    return cor22_bound(params, eps, delta, p, norm(space, x));
}

}  // namespace jensenlab

#endif  // JENSENLAB_SERIES_HPP
