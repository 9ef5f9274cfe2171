#ifndef JENSENLAB_LAB_EXPERIMENT_HPP
#define JENSENLAB_LAB_EXPERIMENT_HPP

#include "jensenlab/lab/bounds.hpp"
#include "jensenlab/lab/config.hpp"
#include "jensenlab/lab/report.hpp"
#include "jensenlab/limits.hpp"
#include "jensenlab/orthogonal_stability.hpp"
#include "jensenlab/restricted.hpp"
#include "jensenlab/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace jensenlab::lab {

/// The mappings an experiment tests. g and h equal f unless the config is
/// Pexider-typed, in which case they carry independent perturbation seeds.
struct Subjects {
    Mapping f, g, h;
};

inline FunctionModel base_model(const ExperimentConfig& c, const PerturbationSpec& pert) {
    FunctionModel m(c.space, c.codomain, c.linear_part());
    if (c.quadratic) m.with_quadratic(*c.quadratic);
    m.with_perturbation(pert);
    return m;
}

inline Subjects build_subjects(const ExperimentConfig& c) {
    const FunctionModel mf = base_model(c, c.perturbation);
    Subjects out{mf, mf, mf};
    if (c.pexider && c.perturbation.kind != PerturbationKind::none) {
        out.g = base_model(c, c.perturbation.with_seed(derive_seed(c.perturbation.seed, 1)));
        out.h = base_model(c, c.perturbation.with_seed(derive_seed(c.perturbation.seed, 2)));
    }
    return out;
}

namespace detail {

/// φ(x, y) − ε at the point where the theorem evaluates its control: φ(x, y),
/// or φ(x, (t/s)y) for the punctured-space propositions.
inline double hypothesis_variable_part(const ExperimentConfig& c, const Vector& x, const Vector& y) {
    if (c.control.kind == ControlKind::constant) return 0.0;
    if (c.theorem == TheoremId::prop4_1 || c.theorem == TheoremId::prop4_2)
        return control_variable_part(c.control, c.space, x, Vector((static_cast<double>(c.params.t) / c.params.s) * y));
    return control_variable_part(c.control, c.space, x, y);
}

/// Pairs at each evaluation point that the theorem's proof substitutes into
/// the hypothesis, kept when they lie in the domain.
inline std::vector<PointPair> structural_pairs(const ExperimentConfig& c, const std::vector<Vector>& points) {
    const double r = c.params.r, s = c.params.s, t = c.params.t;
    const Vector zero = Vector::Zero(c.space.dim);
    std::vector<PointPair> out;
    for (const auto& x : points) {
        std::vector<PointPair> cand = {{x, zero}, {zero, x}, {x, x}, {x, Vector(-x)}, {Vector((r / s) * x), Vector((r / t) * x)},
                                       {Vector((r / s) * x), zero}, {zero, Vector((r / t) * x)}};
        for (const Vector& u : {Vector(x), Vector(0.5 * x), Vector((r / (2.0 * s)) * x), Vector((3.0 * r / (2.0 * s)) * x)}) {
            cand.emplace_back(u, (s / t) * u);
            cand.emplace_back(u, -(s / t) * u);
            cand.emplace_back(3.0 * u, -(s / t) * u);
        }
        for (auto& p : cand)
            if (in_domain(c.domain, c.space, p.first, p.second)) out.push_back(std::move(p));
    }
    return out;
}

/// Orthogonal (inner-product) pairs with x, y and (sx + ty)/r inside the ball;
/// x and y are nonzero.
inline std::vector<PointPair> ball_orthogonal_pairs(const NormedSpace& space, const JensenParams& params, double radius,
                                                    int count, std::uint64_t seed) {
    SplitMix64 rng(derive_seed(seed, 0xba11));
    const double r = params.r, s = params.s, t = params.t;
    std::vector<PointPair> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Vector x = radius * std::sqrt(rng.uniform(1e-6, 0.9)) * random_direction(space, rng);
        Vector v;
        do v = rng.normal_vector(space.dim);
        while (pair_rank(x, v) < 2);
        Vector y = orthogonal_partner(RelationKind::inner_product, space, x, v);
        y *= radius * std::sqrt(rng.uniform(1e-6, 0.9)) / norm(space, y);
        const double mid = norm(space, Vector((s * x + t * y) / r));
        const double worst = std::max({norm(space, x), norm(space, y), mid});
        const double k = worst < 0.95 * radius ? 1.0 : 0.95 * radius / worst;
        out.emplace_back(k * x, k * y);
    }
    return out;
}

inline std::vector<PointPair> with_negations(std::vector<PointPair> pairs) {
    const std::size_t n = pairs.size();
    pairs.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(-pairs[i].first, -pairs[i].second);
    return pairs;
}

/// Collects checks and per-point rows; each row keeps the worst primary check
/// at its point.
class Recorder {
public:
    Recorder(std::size_t points, double slack, double report_tol) : rows_(points), slack_(slack), report_tol_(report_tol) {}

    CheckResult& check(const std::string& name, bool informational = false) {
        for (auto& c : checks_)
            if (c.name == name) return c;
        CheckResult c;
        c.name = name;
        c.informational = informational;
        checks_.push_back(c);
        return checks_.back();
    }

    void add(const std::string& name, double deviation, double bound, double slack) {
        check(name).add(deviation, bound, slack, report_tol_);
    }

    void add_point(std::size_t i, const Vector& x, const std::string& name, double deviation, double bound,
                   bool informational = false) {
        auto& c = check(name, informational);
        c.add(deviation, bound, slack_, report_tol_);
        if (informational) return;
        const double ratio = bound_ratio(deviation, bound, slack_);
        auto& row = rows_[i];
        if (row.x.size() == 0 || ratio > row.ratio) row = {x, deviation, bound, ratio};
    }

    void limit(const LimitEstimate& e) {
        limits_.all_converged = limits_.all_converged && e.converged;
        limits_.max_iterations = std::max(limits_.max_iterations, e.iterations);
        limits_.max_last_gap = std::max(limits_.max_last_gap, e.last_gap);
    }

    void limit_stats(bool converged, int iterations, double gap) {
        limits_.all_converged = limits_.all_converged && converged;
        limits_.max_iterations = std::max(limits_.max_iterations, iterations);
        limits_.max_last_gap = std::max(limits_.max_last_gap, gap);
    }

    [[nodiscard]] double slack() const { return slack_; }
    std::vector<CheckResult>& checks() { return checks_; }
    std::vector<SampleRow>& rows() { return rows_; }
    LimitSummary& limits() { return limits_; }

private:
    std::vector<CheckResult> checks_;
    std::vector<SampleRow> rows_;
    LimitSummary limits_;
    double slack_;
    double report_tol_;
};

struct Context {
    const ExperimentConfig& cfg;
    const Subjects& subj;
    const std::vector<Vector>& points;
    Recorder& rec;
    StabilityReport& report;
    LimitSettings limits;
};

/// ε̂ = sup over pairs of max(0, defect − (φ − ε)).
inline double measure_epsilon(const Context& ctx, const Mapping& f, const Mapping& g, const Mapping& h,
                              const std::vector<PointPair>& pairs) {
    double eps = 0.0;
    for (const auto& [x, y] : pairs) {
        const double d = jensen_defect(f, g, h, ctx.cfg.params, ctx.cfg.codomain, x, y);
        eps = std::max(eps, d - hypothesis_variable_part(ctx.cfg, x, y));
    }
    ctx.report.hypothesis_samples = static_cast<int>(pairs.size());
    ctx.report.epsilon_effective = eps;
    return eps;
}

inline std::vector<PointPair> hypothesis_pairs(const ExperimentConfig& c, const std::vector<Vector>& points) {
    auto pairs = sample_pairs(c.domain, c.space, c.sampler, c.params);
    auto extra = structural_pairs(c, points);
    pairs.insert(pairs.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
    return pairs;
}

inline double bound_at(const Context& ctx, double eps, const Vector& x, Target target) {
    return bound_formula(ctx.cfg.theorem, ctx.cfg.params, ctx.cfg.control.with_epsilon(eps), ctx.cfg.space, x, target);
}

inline void run_thm2_1(Context& ctx) {
    const auto& c = ctx.cfg;
    const double eps = measure_epsilon(ctx, ctx.subj.f, ctx.subj.g, ctx.subj.h, hypothesis_pairs(c, ctx.points));
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto T = dyadic_limit(ctx.subj.f, c.codomain, x, ctx.limits);
        ctx.rec.limit(T);
        ctx.rec.add_point(i, x, "f", norm(c.codomain, ctx.subj.f(x) - T.value), bound_at(ctx, eps, x, Target::f));
        ctx.rec.add_point(i, x, "g", norm(c.codomain, ctx.subj.g(x) - T.value), bound_at(ctx, eps, x, Target::g));
        ctx.rec.add_point(i, x, "h", norm(c.codomain, ctx.subj.h(x) - T.value), bound_at(ctx, eps, x, Target::h));
    }
}

inline void run_cor2_2(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& f = ctx.subj.f;
    const double eps = measure_epsilon(ctx, f, f, f, hypothesis_pairs(c, ctx.points));
    const auto ctl = c.control.with_epsilon(eps);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto T = dyadic_limit(f, c.codomain, x, ctx.limits);
        ctx.rec.limit(T);
        const double dev = norm(c.codomain, f(x) - T.value);
        ctx.rec.add_point(i, x, "f", dev, bound_at(ctx, eps, x, Target::f));
        ctx.rec.add_point(i, x, "f_phi_tilde", dev, phi_tilde_dyadic(ctl, c.space, x, x, c.params).value, true);
    }
}

inline void run_thm3_1(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& f = ctx.subj.f;
    const double d = c.domain.d;
    const auto interior = sample_interior_pairs(c.space, d, c.interior_samples(), derive_seed(c.sampler.seed, 0x3a));

    // The five displayed terms are defects at exterior pairs, so they count as
    // hypothesis samples alongside the sampled pairs.
    const auto pairs = hypothesis_pairs(c, ctx.points);
    std::vector<FiveTermBound> chains;
    std::vector<FiveInequalities> ineqs;
    chains.reserve(interior.size());
    ineqs.reserve(interior.size());
    double eps_terms = 0.0;
    for (const auto& [x, y] : interior) {
        const Vector z = construct_z(x, y, d, c.space);
        ineqs.push_back(verify_five_inequalities(x, y, z, d, c.params, c.space));
        chains.push_back(five_term_defect_bound(f, c.codomain, c.params, x, y, z));
        for (double v : chains.back().terms) eps_terms = std::max(eps_terms, v);
    }
    const double eps = std::max(measure_epsilon(ctx, f, f, f, pairs), eps_terms);
    ctx.report.epsilon_effective = eps;
    ctx.report.hypothesis_samples += 5 * static_cast<int>(interior.size());

    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < interior.size(); ++k) {
        for (double lhs : ineqs[k].lhs) ctx.rec.add("five_inequalities", d, lhs, 0.0);
        min_margin = std::min(min_margin, ineqs[k].min_margin());
        ctx.rec.add("chain_5eps", chains[k].chain_value, 5.0 * eps, ctx.rec.slack());
        ctx.rec.add("direct_le_chain", chains[k].direct_value, chains[k].chain_value, ctx.rec.slack());
        ctx.rec.add("global_defect_5eps", chains[k].direct_value, 5.0 * eps, ctx.rec.slack());
    }
    for (const auto& [x, y] : pairs)
        ctx.rec.add("global_defect_5eps", jensen_defect(f, f, f, c.params, c.codomain, x, y), 5.0 * eps, ctx.rec.slack());

    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto T = dyadic_limit(f, c.codomain, x, ctx.limits);
        ctx.rec.limit(T);
        ctx.rec.add_point(i, x, "f", norm(c.codomain, f(x) - T.value), bound_at(ctx, eps, x, Target::f));
    }
    ctx.report.extra["interior_pairs"] = static_cast<int>(interior.size());
    ctx.report.extra["five_inequalities_min_margin"] = detail::number(min_margin);
}

inline json profile_to_json(const ShellProfile& p, double additivity_tol) {
    json j;
    j["edges"] = p.edges;
    auto sups = json::array();
    for (double v : p.sup_defect) sups.push_back(detail::number(v));
    j["sup_defect"] = sups;
    j["samples_per_shell"] = p.samples_per_shell;
    j["decreasing"] = p.decreasing();
    j["plateau"] = p.plateau();
    j["tail_ratio"] = detail::number(p.tail_ratio());
    j["asymptotically_additive"] = p.asymptotically_additive(additivity_tol);
    return j;
}

inline void run_cor3_2(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& f = ctx.subj.f;
    const auto profile = asymptotic_profile(f, c.space, c.codomain, c.params, *c.shells);
    // ε̂ is the exterior sup beyond the outer shell's inner edge, which the
    // shell profile alone undersamples when min_split > 0.
    const DomainRestriction outer = DomainRestriction::exterior(c.shells->edges[c.shells->edges.size() - 2]);
    auto pairs = sample_pairs(outer, c.space, c.sampler, c.params);
    for (auto& p : structural_pairs(c, ctx.points))
        if (in_domain(outer, c.space, p.first, p.second)) pairs.push_back(std::move(p));
    const double eps = std::max(profile.sup_defect.back(), measure_epsilon(ctx, f, f, f, pairs));
    ctx.report.epsilon_effective = eps;
    ctx.report.hypothesis_samples += c.shells->samples_per_shell * static_cast<int>(profile.sup_defect.size());
    ctx.rec.check("outer_shell_vanishes", true);
    ctx.rec.add("outer_shell_vanishes", profile.sup_defect.back(), 0.0, c.residual_tol);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto T = dyadic_limit(f, c.codomain, x, ctx.limits);
        ctx.rec.limit(T);
        ctx.rec.add_point(i, x, "f", norm(c.codomain, f(x) - T.value), bound_at(ctx, eps, x, Target::f));
    }
    ctx.report.extra["profile"] = profile_to_json(profile, c.residual_tol);
}

/// A(x) = T(x)/s with T the triadic limit of F(x) = r f((s/r)x).
inline LimitEstimate punctured_approximant(const Mapping& f, const ExperimentConfig& c, const Vector& x,
                                           const LimitSettings& limits) {
    const double r = c.params.r, s = c.params.s;
    auto F = [&f, r, s](const Vector& v) -> Vector { return r * f(Vector((s / r) * v)); };
    auto est = triadic_limit(F, c.codomain, x, limits);
    est.value /= s;
    return est;
}

inline void run_prop4_1(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& f = ctx.subj.f;
    const auto& g = ctx.subj.g;
    const Mapping h = odd_even_split(ctx.subj.h).first;
    const double eps = measure_epsilon(ctx, f, g, h, hypothesis_pairs(c, ctx.points));
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto A = punctured_approximant(f, c, x, ctx.limits);
        ctx.rec.limit(A);
        ctx.rec.add_point(i, x, "f", norm(c.codomain, f(x) - A.value), bound_at(ctx, eps, x, Target::f));
        ctx.rec.add_point(i, x, "g", norm(c.codomain, g(x) - A.value), bound_at(ctx, eps, x, Target::g));
        ctx.rec.add_point(i, x, "h", norm(c.codomain, h(x) - A.value), bound_at(ctx, eps, x, Target::h));
    }
}

inline Mapping with_punctured_offset(Mapping m, Vector offset) {
    return [m = std::move(m), offset = std::move(offset)](const Vector& x) -> Vector {
        return is_zero(x) ? m(x) : Vector(m(x) + offset);
    };
}

inline void run_prop4_2(Context& ctx) {
    const auto& c = ctx.cfg;
    const double s = c.params.s, t = c.params.t;
    const Vector offset = c.offset.value_or(Vector::Zero(c.codomain.dim));
    const Mapping& f = ctx.subj.f;
    const Mapping g = with_punctured_offset(ctx.subj.g, offset);
    const Mapping h = with_punctured_offset(odd_even_split(ctx.subj.h).second, Vector(-(s / t) * offset));
    const double eps = measure_epsilon(ctx, f, g, h, hypothesis_pairs(c, ctx.points));
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const Vector hx = (t / s) * h(Vector((s / t) * x));
        ctx.rec.add_point(i, x, "f", norm(c.codomain, f(x)), bound_at(ctx, eps, x, Target::f));
        const double gb = bound_at(ctx, eps, x, Target::g);
        ctx.rec.add_point(i, x, "g_h_bound", norm(c.codomain, g(x) + hx), gb);
        ctx.rec.add_point(i, x, "g_h_bound_displayed", norm(c.codomain, g(x) - hx), gb, true);
    }
}

inline void run_thm4_3(Context& ctx) {
    const auto& c = ctx.cfg;
    const Mapping f = c.offset ? with_punctured_offset(ctx.subj.f, *c.offset) : ctx.subj.f;
    const double eps = measure_epsilon(ctx, f, f, f, with_negations(hypothesis_pairs(c, ctx.points)));
    auto [odd, even] = odd_even_split(f);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto A = punctured_approximant(odd, c, x, ctx.limits);
        ctx.rec.limit(A);
        ctx.rec.add_point(i, x, "odd", norm(c.codomain, odd(x) - A.value), bound_at(ctx, eps, x, Target::odd));
        ctx.rec.add_point(i, x, "even", norm(c.codomain, even(x)), bound_at(ctx, eps, x, Target::even));
        ctx.rec.add_point(i, x, "f", norm(c.codomain, f(x) - A.value), bound_at(ctx, eps, x, Target::f));
    }
}

inline void run_thm5_2(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& [f, g, h] = ctx.subj;
    const auto pairs = with_axis_companions(hypothesis_pairs(c, ctx.points));
    const double eps = measure_epsilon(ctx, f, g, h, pairs);
    if (!c.pexider) {
        for (const auto& [x, y] : pairs) {
            const double v = pexider_reduction_sup(f, c.params, c.codomain, {{x, y}});
            ctx.rec.add("pexider_reduction_3eps", v, 3.0 * eps, ctx.rec.slack());
        }
    }
    auto [odd, even] = odd_even_split(f);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const auto T = dyadic_limit(odd, c.codomain, x, ctx.limits);
        const auto Q = quadratic_limit(even, c.codomain, x, ctx.limits);
        ctx.rec.limit(T);
        ctx.rec.limit(Q);
        const Vector TQ = T.value + Q.value;
        ctx.rec.add_point(i, x, "f", norm(c.codomain, f(x) - TQ), bound_at(ctx, eps, x, Target::f));
        ctx.rec.add_point(i, x, "g", norm(c.codomain, g(x) - TQ), bound_at(ctx, eps, x, Target::g));
        ctx.rec.add_point(i, x, "h", norm(c.codomain, h(x) - TQ), bound_at(ctx, eps, x, Target::h));
    }
}

inline SikorskaConfig sikorska_config(const ExperimentConfig& c) {
    SikorskaConfig s;
    s.ball_radius = c.ball_radius;
    if (c.theorem == TheoremId::thm6_1) {
        s.params = {1, 1, 1};
    } else {
        s.params = c.params;
        s.exclude_origin = true;
    }
    return s;
}

inline void run_thm6(Context& ctx) {
    const auto& c = ctx.cfg;
    const Mapping& f = ctx.subj.f;
    const SikorskaConfig scfg = sikorska_config(c);
    scfg.validate();
    const auto pairs = ball_orthogonal_pairs(c.space, c.params, c.ball_radius, c.sampler.count, c.sampler.seed);
    const double eps = measure_epsilon(ctx, f, f, f, pairs);
    ctx.rec.add("hypothesis_exact", eps, 0.0, c.residual_tol);
    ctx.report.extra["hypothesis_satisfied"] = eps <= c.residual_tol;

    const double r = c.params.r;
    const double k = std::max(r / c.params.s, r / c.params.t);
    std::vector<Vector> scalable;
    for (const auto& x : ctx.points)
        if (norm(c.space, Vector(k * x)) < c.ball_radius) scalable.push_back(x);
    if (c.theorem == TheoremId::thm6_1 && !scalable.empty())
        ctx.rec.add("scaling_identity", scaling_identity_check(f, c.space, c.codomain, c.params, c.ball_radius, scalable), 0.0,
                    1e-9);

    LimitSettings lim = ctx.limits;
    const auto dec = sikorska_extend(f, c.space, c.codomain, scfg, ctx.points, lim);
    ctx.rec.limit_stats(dec.converged, dec.max_iterations, dec.max_last_gap);
    for (std::size_t i = 0; i < ctx.points.size(); ++i) {
        const Vector& x = ctx.points[i];
        const Vector approx = dec.T_hat(x) + (*dec.b_hat)(squared_norm(c.space, x));
        ctx.rec.add_point(i, x, "decomposition", norm(c.codomain, f(x) - approx), 0.0);
    }
    if (c.theorem == TheoremId::thm6_2) {
        // The (O4) witness has norm √λ·‖x‖ and must stay in the ball.
        const double reach = std::sqrt(std::max(1.0, scfg.lambda()));
        std::vector<Vector> inner;
        for (const auto& x : ctx.points)
            if (reach * norm(c.space, x) < 0.98 * c.ball_radius) inner.push_back(x);
        const Mapping even = odd_even_split(f).second;
        if (!inner.empty())
            ctx.rec.add("even_constancy", even_part_constancy_check(even, c.space, c.codomain, scfg, inner, c.sampler.seed),
                        0.0, c.residual_tol);
    }
    ctx.report.extra["decomposition"] = to_json(dec);
    ctx.report.extra["base"] = scfg.base();
    ctx.report.extra["n_max"] = scfg.n_max();
}

inline void finalize(StabilityReport& report, Recorder& rec, double report_tol) {
    report.checks = rec.checks();
    report.rows = rec.rows();
    report.limits = rec.limits();
    report.max_ratio = 0.0;
    report.max_deviation = 0.0;
    report.bound_value = 0.0;
    for (const auto& row : report.rows) {
        report.max_deviation = std::max(report.max_deviation, row.deviation);
        report.bound_value = std::max(report.bound_value, row.bound);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
    }
    std::string failed;
    for (const auto& c : report.checks)
        if (!c.informational && !c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    report.pass = failed.empty() && report.max_ratio <= 1.0 + report_tol;
    if (!report.pass) report.reason = "bound violated: " + failed;
    if (!report.limits.all_converged) {
        report.pass = false;
        report.reason += std::string(report.reason.empty() ? "" : "; ") + "limit iteration did not converge";
    }

    std::vector<SampleRow> sorted = report.rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const SampleRow& a, const SampleRow& b) { return a.ratio > b.ratio; });
    if (sorted.size() > 3) sorted.resize(3);
    report.witnesses = sorted;
}

}  // namespace detail

/// Evaluation points: the configured list, else sampled points (inside the
/// ball for the ball theorems).
inline std::vector<Vector> evaluation_points(const ExperimentConfig& c) {
    if (!c.eval_points.empty()) return c.eval_points;
    if (c.theorem == TheoremId::thm6_1 || c.theorem == TheoremId::thm6_2)
        return sample_ball_points(c.space, c.ball_radius, c.sampler.count, c.sampler.seed);
    return sample_points(c.space, c.sampler);
}

/// Runs one theorem's pipeline: build the subjects, measure ε̂ over the
/// hypothesis domain, run the construction and compare with the bound at ε̂.
/// Deterministic given the config. Divergent constructions are reported with
/// pass = false.
inline StabilityReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    StabilityReport report;
    report.theorem = to_string(config.theorem);
    report.config = to_json(config);

    const Subjects subj = build_subjects(config);
    const auto points = evaluation_points(config);
    const LimitSettings limits = config.effective_limits();
    const double slack = (config.theorem == TheoremId::thm6_1 || config.theorem == TheoremId::thm6_2)
                             ? config.residual_tol
                             : 2.0 * limits.tol;
    detail::Recorder rec(points.size(), slack, config.report_tol);
    detail::Context ctx{config, subj, points, rec, report, limits};

    try {
        switch (config.theorem) {
            case TheoremId::thm2_1: detail::run_thm2_1(ctx); break;
            case TheoremId::cor2_2: detail::run_cor2_2(ctx); break;
            case TheoremId::thm3_1: detail::run_thm3_1(ctx); break;
            case TheoremId::cor3_2: detail::run_cor3_2(ctx); break;
            case TheoremId::prop4_1: detail::run_prop4_1(ctx); break;
            case TheoremId::prop4_2: detail::run_prop4_2(ctx); break;
            case TheoremId::thm4_3: detail::run_thm4_3(ctx); break;
            case TheoremId::thm5_2: detail::run_thm5_2(ctx); break;
            case TheoremId::thm6_1:
            case TheoremId::thm6_2: detail::run_thm6(ctx); break;
        }
        detail::finalize(report, rec, config.report_tol);
    } catch (const std::overflow_error& e) {
        detail::finalize(report, rec, config.report_tol);
        report.pass = false;
        report.reason = std::string("construction diverged: ") + e.what();
    } catch (const std::domain_error& e) {
        detail::finalize(report, rec, config.report_tol);
        report.pass = false;
        report.reason = std::string("construction failed: ") + e.what();
    }
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace jensenlab::lab

#endif  // JENSENLAB_LAB_EXPERIMENT_HPP
