#ifndef JENSENLAB_LIMITS_HPP
#define JENSENLAB_LIMITS_HPP

#include "jensenlab/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jensenlab {

struct LimitEstimate {
    Vector value;
    int iterations = 0;
    double last_gap = 0.0;
    bool converged = false;
};

struct LimitSettings {
    int n_max = 40;
    double tol = 1e-9;
};

/// Iterates aₙ = value_base⁻ⁿ · f(arg_baseⁿ · x) until ‖aₙ − aₙ₋₁‖ ≤ tol or n_max
/// is reached. Non-convergence is reported, not thrown; an argument that
/// overflows to ±∞ throws std::overflow_error.
template <class F>
LimitEstimate scaled_limit(const F& f, const NormedSpace& codomain, const Vector& x, double arg_base, double value_base,
                           const LimitSettings& settings) {
    if (settings.n_max < 1) throw std::invalid_argument("limit needs n_max >= 1");
    LimitEstimate est;
    est.value = f(x);
    double arg_scale = 1.0, value_scale = 1.0;
    for (int n = 1; n <= settings.n_max; ++n) {
        arg_scale *= arg_base;
        value_scale *= value_base;
        const Vector arg = arg_scale * x;
        if (!arg.allFinite()) throw std::overflow_error("limit argument overflowed at n = " + std::to_string(n));
        Vector next = f(arg) / value_scale;
        est.last_gap = norm(codomain, next - est.value);
        est.value = std::move(next);
        est.iterations = n;
        if (est.last_gap <= settings.tol) {
            est.converged = true;
            return est;
        }
    }
    return est;
}

/// T(x) = lim 2⁻ⁿ f(2ⁿx).
template <class F>
LimitEstimate dyadic_limit(const F& f, const NormedSpace& codomain, const Vector& x, const LimitSettings& s = {}) {
    return scaled_limit(f, codomain, x, 2.0, 2.0, s);
}

/// T(x) = lim 3⁻ⁿ F(3ⁿx).
template <class F>
LimitEstimate triadic_limit(const F& f, const NormedSpace& codomain, const Vector& x, const LimitSettings& s = {25, 1e-9}) {
    return scaled_limit(f, codomain, x, 3.0, 3.0, s);
}

/// Q(x) = lim 4⁻ⁿ f(2ⁿx) for an even f.
template <class F>
LimitEstimate quadratic_limit(const F& f, const NormedSpace& codomain, const Vector& x, const LimitSettings& s = {}) {
    return scaled_limit(f, codomain, x, 2.0, 4.0, s);
}

/// ‖base⁻ⁿ f(baseⁿx) − base⁻ᵐ f(baseᵐx)‖ for m < n.
template <class F>
double cauchy_gap(const F& f, const NormedSpace& codomain, const Vector& x, int base, int m, int n) {
    if (base != 2 && base != 3) throw std::invalid_argument("cauchy_gap base must be 2 or 3");
    if (!(0 <= m && m < n)) throw std::invalid_argument("cauchy_gap needs 0 <= m < n");
    const double bn = std::pow(static_cast<double>(base), n);
    const double bm = std::pow(static_cast<double>(base), m);
    const Vector an = bn * x, am = bm * x;
    if (!an.allFinite()) throw std::overflow_error("cauchy_gap argument overflowed");
    return norm(codomain, f(an) / bn - f(am) / bm);
}

}  // namespace jensenlab

#endif  // JENSENLAB_LIMITS_HPP
