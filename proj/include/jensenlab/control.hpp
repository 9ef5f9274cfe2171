#ifndef JENSENLAB_CONTROL_HPP
#define JENSENLAB_CONTROL_HPP

#include "jensenlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace jensenlab {

enum class ControlKind { constant, mixed, table };

inline std::string to_string(ControlKind k) {
    switch (k) {
        case ControlKind::constant: return "constant";
        case ControlKind::mixed: return "mixed";
        case ControlKind::table: return "table";
    }
    return "?";
}

/// Control function φ(x, y) bounding the Jensen defect.
///
///  constant: φ = ε
///  mixed:    φ = ε + δ(‖x‖ᵖ + ‖y‖ᵖ), with 0ᵖ := 0 for every p ∈ [0, 1)
///  table:    φ = ε + τ(‖x‖) + τ(‖y‖), τ piecewise linear through the knots and
///            continued as τ(ρ_last)·(ρ/ρ_last)^q past the last knot
///
/// The growth exponent (p, resp. q) must be < 1 for the dyadic and triadic
/// series to converge.
struct ControlFunctionSpec {
    ControlKind kind = ControlKind::constant;
    double epsilon = 0.0;
    double delta = 0.0;
    double p = 0.0;
    std::vector<double> knots;   // table radii, starting at 0, strictly increasing
    std::vector<double> values;  // table values τ(knot) ≥ 0
    double q = 0.0;

    static ControlFunctionSpec constant(double eps) { return checked({ControlKind::constant, eps, 0.0, 0.0, {}, {}, 0.0}); }

    static ControlFunctionSpec mixed(double eps, double delta, double p) {
        return checked({ControlKind::mixed, eps, delta, p, {}, {}, 0.0});
    }

    static ControlFunctionSpec table(std::vector<double> knots, std::vector<double> values, double q, double eps = 0.0) {
        ControlFunctionSpec s{ControlKind::table, eps, 0.0, 0.0, std::move(knots), std::move(values), q};
        return checked(std::move(s));
    }

    [[nodiscard]] double growth_exponent() const {
        switch (kind) {
            case ControlKind::constant: return 0.0;
            case ControlKind::mixed: return p;
            case ControlKind::table: return q;
        }
        return 0.0;
    }

    [[nodiscard]] ControlFunctionSpec with_epsilon(double eps) const {
        ControlFunctionSpec s = *this;
        s.epsilon = eps;
        return s;
    }

    void validate() const {
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("control epsilon must be finite and >= 0");
        if (kind == ControlKind::mixed) {
            if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("control delta must be finite and >= 0");
            if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("control exponent p must lie in [0, 1)");
        }
        if (kind == ControlKind::table) {
            if (knots.size() < 2 || knots.size() != values.size())
                throw std::invalid_argument("control table needs >= 2 knots with matching values");
            if (knots.front() != 0.0) throw std::invalid_argument("control table must start at radius 0");
            for (std::size_t i = 1; i < knots.size(); ++i)
                if (!(knots[i] > knots[i - 1])) throw std::invalid_argument("control table knots must increase");
            for (double v : values)
                if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("control table values must be >= 0");
            if (!(q >= 0.0)) throw std::invalid_argument("control table growth exponent must be >= 0");
        }
    }

    /// Series built from 2⁻ⁿφ(2ⁿ·) and 3⁻ⁿφ(3ⁿ·) need growth exponent < 1.
    void require_convergent() const {
        if (!(growth_exponent() < 1.0)) throw std::domain_error("control function series diverges (growth exponent >= 1)");
    }

    /// τ(ρ) for the table kind.
    [[nodiscard]] double radial(double rho) const {
        if (rho <= knots.front()) return values.front();
        if (rho >= knots.back()) return values.back() * std::pow(rho / knots.back(), q);
        const auto it = std::upper_bound(knots.begin(), knots.end(), rho);
        const std::size_t k = static_cast<std::size_t>(it - knots.begin());
        const double w = (rho - knots[k - 1]) / (knots[k] - knots[k - 1]);
        return values[k - 1] + w * (values[k] - values[k - 1]);
    }

private:
    static ControlFunctionSpec checked(ControlFunctionSpec s) {
        s.validate();
        return s;
    }
};

inline double power_or_zero(double rho, double p) { return rho == 0.0 ? 0.0 : std::pow(rho, p); }

/// φ(x, y) − ε: the part of the control that depends on the arguments.
inline double control_variable_part(const ControlFunctionSpec& spec, const NormedSpace& space, const Vector& x,
                                    const Vector& y) {
    switch (spec.kind) {
        case ControlKind::constant: return 0.0;
        case ControlKind::mixed:
            return spec.delta * (power_or_zero(norm(space, x), spec.p) + power_or_zero(norm(space, y), spec.p));
        case ControlKind::table: return spec.radial(norm(space, x)) + spec.radial(norm(space, y));
    }
    return 0.0;
}

inline double control_phi_eval(const ControlFunctionSpec& spec, const NormedSpace& space, const Vector& x,
                               const Vector& y) {
    return spec.epsilon + control_variable_part(spec, space, x, y);
}

}  // namespace jensenlab

#endif  // JENSENLAB_CONTROL_HPP
