#ifndef JENSENLAB_RATZ_HPP
#define JENSENLAB_RATZ_HPP

#include "jensenlab/orthogonality.hpp"
#include "jensenlab/random.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

namespace jensenlab {

struct AxiomResult {
    std::string name;
    bool applicable = true;
    bool pass = true;
    int checked = 0;
    std::optional<std::string> counterexample;
};

struct AxiomReport {
    AxiomResult o1{"O1", true, true, 0, std::nullopt};
    AxiomResult o2{"O2", true, true, 0, std::nullopt};
    AxiomResult o3{"O3", true, true, 0, std::nullopt};
    AxiomResult o4{"O4", true, true, 0, std::nullopt};

    [[nodiscard]] bool all_pass() const {
        return o1.pass && o2.pass && o3.pass && (!o4.applicable || o4.pass);
    }
};

namespace detail {

inline std::string fmt_vec(const Vector& v) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ')';
    return os.str();
}

inline void record_failure(AxiomResult& r, const std::string& what) {
    if (r.pass) r.counterexample = what;
    r.pass = false;
}

/// Searches y0 = β·u (x ⊥ u in P) with x + y0 ⊥ λx − y0, maximising the
/// Birkhoff–James margin over β. Returns the best margin found.
inline double bj_o4_search(const OrthogonalityRelation& rel, const NormedSpace& space, const Vector& x,
                           const Vector& u, double lambda, Vector& witness) {
    const LambdaGrid coarse{rel.bj_grid->lambda_min, rel.bj_grid->lambda_max, 1001};
    auto margin = [&](double beta) {
        const Vector y0 = beta * u;
        const double m1 = bj_margin(space, x, y0, coarse);
        const double m2 = bj_margin(space, x + y0, lambda * x - y0, coarse);
        return std::min(m1, m2);
    };
    const double scale = norm(space, x) / norm(space, u);
    double best_beta = 0.0, best = -std::numeric_limits<double>::infinity();
    std::vector<double> betas;
    for (int i = 0; i <= 60; ++i) {
        const double mag = scale * std::pow(10.0, -3.0 + 6.0 * i / 60.0);
        betas.push_back(mag);
        betas.push_back(-mag);
    }
    for (double b : betas) {
        const double m = margin(b);
        if (m > best) {
            best = m;
            best_beta = b;
        }
    }
    // refine on a multiplicative bracket around the best β
    double lo = best_beta * std::pow(10.0, -0.1), hi = best_beta * std::pow(10.0, 0.1);
    if (lo > hi) std::swap(lo, hi);
    constexpr double invphi = 0.6180339887498948482;
    for (int i = 0; i < 60; ++i) {
        const double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
        if (margin(c) >= margin(d))
            hi = d;
        else
            lo = c;
    }
    const double mid = 0.5 * (lo + hi);
    const double refined = margin(mid);
    if (refined > best) {
        best = refined;
        best_beta = mid;
    }
    // final acceptance uses the full-resolution grid
    const Vector y0 = best_beta * u;
    witness = y0;
    return std::min(bj_margin(space, x, y0, *rel.bj_grid), bj_margin(space, x + y0, lambda * x - y0, *rel.bj_grid));
}

}  // namespace detail

/// Samples the four Rätz axioms for a relation. Failures are recorded with the
/// first counterexample; the check itself never throws for axiom failures.
inline AxiomReport check_ratz_axioms(const OrthogonalityRelation& rel, const NormedSpace& space, int trials,
                                     std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (rel.kind == RelationKind::inner_product && !space.has_inner_product())
        throw std::invalid_argument("inner-product relation needs an inner product space");
    using detail::fmt_vec;
    using detail::record_failure;

    AxiomReport report;
    SplitMix64 rng(seed);
    const Vector zero = Vector::Zero(space.dim);

    for (int i = 0; i < trials; ++i) {
        const Vector x = random_point(space, rng, 0.1, 10.0);
        ++report.o1.checked;
        if (!is_orthogonal(rel, space, x, zero) || !is_orthogonal(rel, space, zero, x))
            record_failure(report.o1, "x=" + fmt_vec(x));
    }

    if (space.dim < 2) {
        report.o2.applicable = report.o3.applicable = report.o4.applicable = false;
        report.o2.pass = report.o3.pass = report.o4.pass = true;
        return report;
    }

    for (int i = 0; i < trials; ++i) {
        const Vector x = random_point(space, rng, 0.5, 2.0);
        // dependent pairs must not be orthogonal
        const double kappa = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 10.0);
        ++report.o2.checked;
        if (is_orthogonal(rel, space, x, kappa * x))
            record_failure(report.o2, "dependent pair judged orthogonal: x=" + fmt_vec(x) + ", y=" + fmt_vec(kappa * x));
        Vector y = orthogonal_partner(rel.kind, space, x, rng.normal_vector(space.dim));
        if (is_zero(y)) continue;
        y *= rng.uniform(0.5, 2.0) / norm(space, y);
        if (is_orthogonal(rel, space, x, y)) {
            ++report.o2.checked;
            if (!linearly_independent(x, y))
                record_failure(report.o2, "orthogonal but dependent: x=" + fmt_vec(x) + ", y=" + fmt_vec(y));
        }
    }

    for (int i = 0; i < trials; ++i) {
        const Vector x = random_point(space, rng, 0.5, 2.0);
        Vector y = orthogonal_partner(rel.kind, space, x, rng.normal_vector(space.dim));
        if (is_zero(y)) continue;
        y *= rng.uniform(0.5, 2.0) / norm(space, y);
        if (!is_orthogonal(rel, space, x, y)) continue;
        auto coef = [&] {
            if (rng.uniform01() < 0.1) return 0.0;
            return (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 10.0);
        };
        const double a = coef(), b = coef();
        ++report.o3.checked;
        if (!is_orthogonal(rel, space, a * x, b * y))
            record_failure(report.o3, "x=" + fmt_vec(x) + ", y=" + fmt_vec(y) + ", alpha=" + std::to_string(a) +
                                          ", beta=" + std::to_string(b));
    }

    for (int i = 0; i < trials; ++i) {
        const Vector p1 = rng.normal_vector(space.dim);
        const Vector p2 = rng.normal_vector(space.dim);
        if (pair_rank(p1, p2) < 2) continue;
        const Vector x = rng.normal() * p1 + rng.normal() * p2;
        const double lambda = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
        ++report.o4.checked;
        Vector y0;
        bool ok = false;
        switch (rel.kind) {
            case RelationKind::inner_product:
                y0 = o4_witness(space, p1, p2, x, lambda);
                ok = is_orthogonal(rel, space, x, y0) && is_orthogonal(rel, space, x + y0, lambda * x - y0);
                break;
            case RelationKind::trivial: {
                const auto [q1, q2] = plane_frame(p1, p2);
                y0 = orthogonal_partner(RelationKind::inner_product, space, x, q1.dot(x) * q2 - q2.dot(x) * q1);
                ok = is_orthogonal(rel, space, x, y0) && is_orthogonal(rel, space, x + y0, lambda * x - y0);
                break;
            }
            case RelationKind::birkhoff_james: {
                const auto [q1, q2] = plane_frame(p1, p2);
                const Vector w = q1.dot(x) * q2 - q2.dot(x) * q1;  // in P, independent of x
                const Vector u = orthogonal_partner(RelationKind::birkhoff_james, space, x, w);
                ok = detail::bj_o4_search(rel, space, x, u, lambda, y0) >= -rel.tolerance;
                break;
            }
        }
        if (!ok)
            record_failure(report.o4, "x=" + fmt_vec(x) + ", lambda=" + std::to_string(lambda) + ", best y0=" + fmt_vec(y0));
    }
    return report;
}

inline nlohmann::ordered_json to_json(const AxiomResult& r) {
    nlohmann::ordered_json j;
    j["axiom"] = r.name;
    j["applicable"] = r.applicable;
    j["pass"] = r.pass;
    j["checked"] = r.checked;
    j["counterexample"] = r.counterexample ? nlohmann::ordered_json(*r.counterexample) : nlohmann::ordered_json(nullptr);
    return j;
}

inline nlohmann::ordered_json to_json(const AxiomReport& r) {
    nlohmann::ordered_json j;
    j["all_pass"] = r.all_pass();
    j["axioms"] = {to_json(r.o1), to_json(r.o2), to_json(r.o3), to_json(r.o4)};
    return j;
}

}  // namespace jensenlab

#endif  // JENSENLAB_RATZ_HPP
