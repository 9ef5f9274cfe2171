#ifndef JENSENLAB_LAB_BOUNDS_HPP
#define JENSENLAB_LAB_BOUNDS_HPP

#include "jensenlab/lab/config.hpp"
#include "jensenlab/series.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace jensenlab::lab {

/// Which conclusion of a theorem a bound refers to.
enum class Target { f, g, h, odd, even };

inline std::string to_string(Target t) {
    switch (t) {
        case Target::f: return "f";
        case Target::g: return "g";
        case Target::h: return "h";
        case Target::odd: return "odd";
        case Target::even: return "even";
    }
    return "?";
}

class IncompatibleControl : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_kind(const ControlFunctionSpec& c, bool ok, TheoremId id) {
    if (!ok) throw IncompatibleControl(to_string(id) + ": incompatible control kind '" + to_string(c.kind) + "'");
}

inline void require_target(bool ok, TheoremId id, Target t) {
    if (!ok) throw std::invalid_argument(to_string(id) + " has no bound for target " + to_string(t));
}

}  // namespace detail

/// Right-hand side of the theorem's conclusion at x, with the control φ as given
/// (experiments pass φ with ε replaced by the measured hypothesis sup).
///
///  thm2_1  f: φ̃(x,x);  g: φ(x,0)/s + (r/s)φ̃((s/r)x,(s/r)x);  h: φ(0,x)/t + (r/t)φ̃((t/r)x,(t/r)x)
///  cor2_2  f: (3/r)ε + (1/r)[(r/s)ᵖ + (r/t)ᵖ]·2δ‖x‖ᵖ/(1 − 2^{p−1})
///  thm3_1, cor3_2  f: 15ε/r
///  prop4_1 f: φ̃₃((r/s)x,(r/s)x)/r;  g: [φ(x,x) + φ(x,−x) + φ̃₃(2x,2x)]/2s;
///          h: [φ(kx,kx) + φ(kx,−kx) + φ̃₃(2kx,2kx)]/2t with k = t/s
///  prop4_2 f: [φ(rx/2s, rx/2s) + φ(rx/2s, −rx/2s)]/r;  g: φ(x,−x)/s
///  thm4_3  odd: min{3ε/r, 5ε/2s, 5ε/2t};  even: 2ε/r;  f: odd + even
///  thm5_2  f: 68ε;  g, h: 80ε
///  thm6_1, thm6_2  f: 0 (exact decomposition)
inline double bound_formula(TheoremId id, const JensenParams& params, const ControlFunctionSpec& control,
                            const NormedSpace& space, const Vector& x, Target target = Target::f) {
    params.validate();
    control.validate();
    require_dim(space, x, "x");
    const double r = params.r, s = params.s, t = params.t;
    const double eps = control.epsilon;
    const Vector zero = Vector::Zero(space.dim);
    auto phi = [&](const Vector& a, const Vector& b) { return control_phi_eval(control, space, a, b); };
    using detail::require_kind;
    using detail::require_target;

    switch (id) {
        case TheoremId::thm2_1: {
            auto tilde = [&](const Vector& v) { return phi_tilde_dyadic(control, space, v, v, params).value; };
            if (target == Target::f) return tilde(x);
            if (target == Target::g) return phi(x, zero) / s + (r / s) * tilde(Vector((s / r) * x));
            if (target == Target::h) return phi(zero, x) / t + (r / t) * tilde(Vector((t / r) * x));
            require_target(false, id, target);
            break;
        }
        case TheoremId::cor2_2: {
            require_kind(control, control.kind != ControlKind::table, id);
            require_target(target == Target::f, id, target);
            const bool mixed = control.kind == ControlKind::mixed;
            return cor22_bound(params, eps, mixed ? control.delta : 0.0, mixed ? control.p : 0.0, norm(space, x));
        }
        case TheoremId::thm3_1:
        case TheoremId::cor3_2:
            require_kind(control, control.kind == ControlKind::constant, id);
            require_target(target == Target::f, id, target);
            return 15.0 * eps / r;
        case TheoremId::prop4_1: {
            auto tilde = [&](const Vector& v) { return phi_tilde_triadic(control, space, v, v).value; };
            if (target == Target::f) return tilde(Vector((r / s) * x)) / r;
            if (target == Target::g) return (phi(x, x) + phi(x, -x) + tilde(Vector(2.0 * x))) / (2.0 * s);
            if (target == Target::h) {
                const Vector kx = (t / s) * x;
                return (phi(kx, kx) + phi(kx, -kx) + tilde(Vector(2.0 * kx))) / (2.0 * t);
            }
            require_target(false, id, target);
            break;
        }
        case TheoremId::prop4_2: {
            if (target == Target::f) {
                const Vector u = (r / (2.0 * s)) * x;
                return (phi(u, u) + phi(u, -u)) / r;
            }
            if (target == Target::g) return phi(x, -x) / s;
            require_target(false, id, target);
            break;
        }
        case TheoremId::thm4_3: {
            require_kind(control, control.kind == ControlKind::constant, id);
            const double odd = std::min({3.0 * eps / r, 5.0 * eps / (2.0 * s), 5.0 * eps / (2.0 * t)});
            const double even = 2.0 * eps / r;
            if (target == Target::odd) return odd;
            if (target == Target::even) return even;
            require_target(target == Target::f, id, target);
            return odd + even;
        }
        case TheoremId::thm5_2:
            require_kind(control, control.kind == ControlKind::constant, id);
            require_target(target == Target::f || target == Target::g || target == Target::h, id, target);
            return target == Target::f ? 68.0 * eps : 80.0 * eps;
        case TheoremId::thm6_1:
        case TheoremId::thm6_2:
            require_kind(control, control.kind == ControlKind::constant, id);
            require_target(target == Target::f, id, target);
            return 0.0;
    }
    throw std::invalid_argument("unknown theorem");
}

}  // namespace jensenlab::lab

#endif  // JENSENLAB_LAB_BOUNDS_HPP
