#ifndef JENSENLAB_RESTRICTED_HPP
#define JENSENLAB_RESTRICTED_HPP

#include "jensenlab/function_model.hpp"
#include "jensenlab/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace jensenlab {

/// Auxiliary point for an interior pair (‖x‖ + ‖y‖ < d):
/// z = (1 + d/‖x‖)x if ‖x‖ ≥ ‖y‖, else (1 + d/‖y‖)y; z = d·e₁ when x = y = 0.
inline Vector construct_z(const Vector& x, const Vector& y, double d, const NormedSpace& space) {
    if (!(d > 0.0)) throw std::invalid_argument("construct_z needs d > 0");
    require_dim(space, x, "x");
    require_dim(space, y, "y");
    const double nx = norm(space, x), ny = norm(space, y);
    if (nx == 0.0 && ny == 0.0) {
        Vector e1 = Vector::Zero(space.dim);
        e1[0] = 1.0;
        return (d / norm(space, e1)) * e1;
    }
    if (nx >= ny) return (1.0 + d / nx) * x;
    return (1.0 + d / ny) * y;
}

/// The five exterior pairs whose defects telescope to the defect at (x, y):
/// (P, Q), (x, z), (W, y), (W, Q), (P, z) with
/// P = (2 + t/s)z + (t/s)y, Q = (s/t)x − (1 + 2s/t)z, W = 2(1 + t/s)z.
inline std::array<PointPair, 5> auxiliary_pairs(const Vector& x, const Vector& y, const Vector& z,
                                                const JensenParams& params) {
    const double ts = static_cast<double>(params.t) / params.s;
    const double st = static_cast<double>(params.s) / params.t;
    const Vector P = (2.0 + ts) * z + ts * y;
    const Vector Q = st * x - (1.0 + 2.0 * st) * z;
    const Vector W = 2.0 * (1.0 + ts) * z;
    return {{{P, Q}, {x, z}, {W, y}, {W, Q}, {P, z}}};
}

struct FiveInequalities {
    std::array<double, 5> lhs{};
    std::array<double, 5> margin{};  // lhs − d
    std::array<bool, 5> pass{};

    [[nodiscard]] bool all_pass() const { return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; }); }
    [[nodiscard]] double min_margin() const { return *std::min_element(margin.begin(), margin.end()); }
};

/// Evaluates ‖a‖ + ‖b‖ ≥ d for each auxiliary pair.
inline FiveInequalities verify_five_inequalities(const Vector& x, const Vector& y, const Vector& z, double d,
                                                 const JensenParams& params, const NormedSpace& space) {
    params.validate();
    FiveInequalities out;
    const auto pairs = auxiliary_pairs(x, y, z, params);
    for (std::size_t i = 0; i < 5; ++i) {
        out.lhs[i] = norm(space, pairs[i].first) + norm(space, pairs[i].second);
        out.margin[i] = out.lhs[i] - d;
        out.pass[i] = out.lhs[i] >= d;
    }
    return out;
}

struct FiveTermBound {
    double chain_value = 0.0;
    double direct_value = 0.0;
    std::array<double, 5> terms{};
};

/// The five defect terms of the telescoping estimate and the direct defect at
/// (x, y). Terms sharing a midpoint evaluate f at the same vector, so the five
/// signed terms sum exactly to the direct one.
template <class F>
FiveTermBound five_term_defect_bound(const F& f, const NormedSpace& codomain, const JensenParams& params,
                                     const Vector& x, const Vector& y, const Vector& z) {
    const double r = params.r, s = params.s, t = params.t;
    const auto pairs = auxiliary_pairs(x, y, z, params);
    const Vector& P = pairs[0].first;
    const Vector& Q = pairs[0].second;
    const Vector& W = pairs[2].first;
    const Vector m_xy = (s * x + t * y) / r;
    const Vector m_xz = (s * x + t * z) / r;
    const Vector m_wy = (2.0 * (s + t) * z + t * y) / r;
    const Vector f_xy = f(m_xy), f_xz = f(m_xz), f_wy = f(m_wy);
    const Vector fx = f(x), fy = f(y), fz = f(z), fP = f(P), fQ = f(Q), fW = f(W);

    FiveTermBound out;
    out.terms = {norm(codomain, r * f_xy - s * fP - t * fQ), norm(codomain, r * f_xz - s * fx - t * fz),
                 norm(codomain, r * f_wy - s * fW - t * fy), norm(codomain, -r * f_xz + s * fW + t * fQ),
                 norm(codomain, -r * f_wy + s * fP + t * fz)};
    for (double v : out.terms) out.chain_value += v;
    out.direct_value = norm(codomain, r * f_xy - s * fx - t * fy);
    return out;
}

inline FiveTermBound five_term_defect_bound(const FunctionModel& f, const JensenParams& params, const Vector& x,
                                            const Vector& y, const Vector& z) {
    return five_term_defect_bound(f, f.codomain(), params, x, y, z);
}

/// Sup of the defect over a sample of pairs.
template <class F, class G, class H>
double defect_sup(const F& f, const G& g, const H& h, const JensenParams& params, const NormedSpace& codomain,
                  const std::vector<PointPair>& pairs) {
    double sup = 0.0;
    for (const auto& [x, y] : pairs) sup = std::max(sup, jensen_defect(f, g, h, params, codomain, x, y));
    return sup;
}

/// Empirical sup of the defect over exterior pairs (‖x‖ + ‖y‖ ≥ d).
template <class F, class G, class H>
double exterior_defect_sup(const F& f, const G& g, const H& h, const JensenParams& params, double d,
                           const NormedSpace& space, const NormedSpace& codomain, const SamplerSpec& sampler) {
    return defect_sup(f, g, h, params, codomain, sample_pairs(DomainRestriction::exterior(d), space, sampler, params));
}

inline double exterior_defect_sup(const FunctionModel& f, const FunctionModel& g, const FunctionModel& h,
                                  const JensenParams& params, double d, const SamplerSpec& sampler) {
    return exterior_defect_sup(f, g, h, params, d, f.domain(), f.codomain(), sampler);
}

/// Shell layout for the asymptotic profile. Pairs in shell k have
/// ‖x‖ + ‖y‖ ∈ [edges[k], edges[k+1]) and split ‖x‖ = λ(‖x‖ + ‖y‖) with
/// λ ∈ [min_split, 1 − min_split]. With min_split = 0 an eighth of each shell
/// also probes a small ‖x‖ ∈ [1e-3, 1] against a large y.
struct ShellSpec {
    std::vector<double> edges;
    int samples_per_shell = 1000;
    double min_split = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (edges.size() < 2) throw std::invalid_argument("shell profile needs >= 2 edges");
        if (!(edges.front() > 0.0)) throw std::invalid_argument("shell edges must be positive");
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("shell edges must increase strictly");
        if (samples_per_shell < 1) throw std::invalid_argument("samples_per_shell must be >= 1");
        if (!(min_split >= 0.0 && min_split <= 0.5)) throw std::invalid_argument("min_split must lie in [0, 0.5]");
    }
};

struct ShellProfile {
    std::vector<double> edges;
    std::vector<double> sup_defect;
    int samples_per_shell = 0;

    /// Each shell sup ≤ previous + 1e-9.
    [[nodiscard]] bool decreasing() const {
        for (std::size_t k = 1; k < sup_defect.size(); ++k)
            if (sup_defect[k] > sup_defect[k - 1] + 1e-9) return false;
        return true;
    }

    /// Last shell sup over first shell sup (0 when both vanish).
    [[nodiscard]] double tail_ratio() const {
        if (sup_defect.empty() || sup_defect.front() == 0.0) return 0.0;
        return sup_defect.back() / sup_defect.front();
    }

    /// Decreasing and the outermost shell sup is at most `tol`.
    [[nodiscard]] bool asymptotically_additive(double tol) const {
        return decreasing() && (sup_defect.empty() || sup_defect.back() <= tol);
    }

    /// Outermost shell keeps at least half of the innermost sup.
    [[nodiscard]] bool plateau() const { return !sup_defect.empty() && sup_defect.front() > 0.0 && tail_ratio() >= 0.5; }

    /// Sup over shells k, k+1, …: the sampled surrogate for the sup over ‖x‖ + ‖y‖ ≥ edges[k].
    [[nodiscard]] std::vector<double> tail_sup() const {
        std::vector<double> out(sup_defect.size());
        double run = 0.0;
        for (std::size_t k = sup_defect.size(); k-- > 0;) {
            run = std::max(run, sup_defect[k]);
            out[k] = run;
        }
        return out;
    }
};

template <class F>
ShellProfile asymptotic_profile(const F& f, const NormedSpace& space, const NormedSpace& codomain,
                                const JensenParams& params, const ShellSpec& shells) {
    shells.validate();
    params.validate();
    ShellProfile out;
    out.edges = shells.edges;
    out.samples_per_shell = shells.samples_per_shell;
    for (std::size_t k = 0; k + 1 < shells.edges.size(); ++k) {
        SplitMix64 rng(derive_seed(shells.seed, k));
        const double lo = shells.edges[k], hi = shells.edges[k + 1];
        double sup = 0.0;
        for (int i = 0; i < shells.samples_per_shell; ++i) {
            const double total = std::exp(rng.uniform(std::log(lo), std::log(hi)));
            const Vector u = random_direction(space, rng);
            const Vector v = random_direction(space, rng);
            Vector x, y;
            if (shells.min_split == 0.0 && i % 8 == 7) {
                const double small = std::min(std::exp(rng.uniform(std::log(1e-3), 0.0)), 0.5 * lo);
                x = small * u;
                y = (total - small) * v;
            } else {
                const double lam = rng.uniform(shells.min_split, 1.0 - shells.min_split);
                x = lam * total * u;
                y = (1.0 - lam) * total * v;
            }
            if (rng.uniform01() < 0.5) std::swap(x, y);
            sup = std::max(sup, jensen_defect(f, f, f, params, codomain, x, y));
        }
        out.sup_defect.push_back(sup);
    }
    return out;
}

inline ShellProfile asymptotic_profile(const FunctionModel& f, const JensenParams& params, const ShellSpec& shells) {
    return asymptotic_profile(f, f.domain(), f.codomain(), params, shells);
}

/// CSV with header shell_edge_low,shell_edge_high,sup_defect,samples.
inline void write_profile_csv(std::ostream& os, const ShellProfile& p) {
    os << "shell_edge_low,shell_edge_high,sup_defect,samples\n";
    const auto old = os.precision(17);
    for (std::size_t k = 0; k < p.sup_defect.size(); ++k)
        os << p.edges[k] << ',' << p.edges[k + 1] << ',' << p.sup_defect[k] << ',' << p.samples_per_shell << '\n';
    os.precision(old);
}

}  // namespace jensenlab

#endif  // JENSENLAB_RESTRICTED_HPP
