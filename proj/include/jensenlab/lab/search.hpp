#ifndef JENSENLAB_LAB_SEARCH_HPP
#define JENSENLAB_LAB_SEARCH_HPP

#include "jensenlab/lab/experiment.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace jensenlab::lab {

/// Step sizes decay geometrically from step_initial to step_final over each
/// restart; a step moves the evaluation point by step·‖x‖ in a random direction.
struct SearchSettings {
    int iterations = 200;
    int restarts = 1;
    double step_initial = 0.5;
    double step_final = 1e-3;
    double reseed_probability = 0.3;
    std::uint64_t seed = 0;

    void validate() const {
        if (iterations < 1) throw std::invalid_argument("search needs iterations >= 1");
        if (restarts < 1) throw std::invalid_argument("search needs restarts >= 1");
        if (!(step_initial > 0.0 && step_final > 0.0 && step_final <= step_initial))
            throw std::invalid_argument("search steps must satisfy 0 < step_final <= step_initial");
        if (!(reseed_probability >= 0.0 && reseed_probability <= 1.0))
            throw std::invalid_argument("reseed_probability must lie in [0, 1]");
    }

    [[nodiscard]] double step(int k, int per_restart) const {
        if (per_restart <= 1) return step_initial;
        return step_initial * std::pow(step_final / step_initial, static_cast<double>(k) / (per_restart - 1));
    }
};

struct SearchResult {
    double worst_ratio = 0.0;
    ExperimentConfig witness_config;
    StabilityReport witness_report;
    int evaluated = 0;
    int accepted = 0;
    int rejected = 0;
};

/// True when the instance's hypothesis holds with its own measured ε̂ and the
/// construction converged, so its ratio is admissible.
inline bool admissible(const StabilityReport& r) {
    if (!r.limits.all_converged) return false;
    if (r.extra.contains("hypothesis_satisfied") && !r.extra["hypothesis_satisfied"].get<bool>()) return false;
    return r.reason.rfind("construction", 0) != 0;
}

namespace detail {

inline ExperimentConfig single_point(const ExperimentConfig& base, const Vector& x, std::uint64_t pert_seed) {
    ExperimentConfig c = base;
    c.eval_points = {x};
    c.perturbation.seed = pert_seed;
    return c;
}

inline Vector keep_in_ball(const ExperimentConfig& c, Vector x) {
    if (c.theorem != TheoremId::thm6_1 && c.theorem != TheoremId::thm6_2) return x;
    const double n = norm(c.space, x);
    if (n >= 0.98 * c.ball_radius) x *= 0.9 * c.ball_radius / n;
    if (is_zero(x)) x[0] = 1e-3 * c.ball_radius;
    return x;
}

}  // namespace detail

/// Hill-climbs over the perturbation seed and a single evaluation point to
/// maximize the conclusion ratio. Each candidate is run as a full experiment,
/// so ε̂ is re-measured with the candidate point's structural pairs included;
/// inadmissible candidates are never reported. Deterministic given the config
/// and settings.
inline SearchResult adversarial_search(const ExperimentConfig& config, const SearchSettings& settings) {
    settings.validate();
    config.validate();
    SplitMix64 rng(derive_seed(settings.seed ^ config.sampler.seed, 0x5ea));
    SearchResult best;
    best.witness_config = config;

    const StabilityReport initial = run_experiment(config);
    std::vector<Vector> starts;
    for (const auto& w : initial.witnesses) starts.push_back(w.x);
    if (starts.empty()) starts.push_back(evaluation_points(config).front());

    const int per_restart = std::max(1, settings.iterations / settings.restarts);
    int budget = settings.iterations;
    for (int restart = 0; restart < settings.restarts && budget > 0; ++restart) {
        Vector x = starts[static_cast<std::size_t>(restart) % starts.size()];
        if (restart >= static_cast<int>(starts.size())) {
            x = random_point(config.space, rng, config.sampler.radius_min, config.sampler.radius_max);
            x = detail::keep_in_ball(config, x);
        }
        std::uint64_t pseed = config.perturbation.seed;
        double current = -1.0;
        for (int k = 0; k < per_restart && budget > 0; ++k, --budget) {
            Vector cand_x = x;
            std::uint64_t cand_seed = pseed;
            if (k > 0) {
                if (config.perturbation.kind != PerturbationKind::none && rng.uniform01() < settings.reseed_probability) {
                    cand_seed = rng.next();
                } else {
                    const double scale = std::max(norm(config.space, x), config.sampler.radius_min);
                    cand_x = x + settings.step(k, per_restart) * scale * random_direction(config.space, rng);
                    cand_x = detail::keep_in_ball(config, cand_x);
                    if (is_zero(cand_x)) continue;
                }
            }
            const ExperimentConfig cand = detail::single_point(config, cand_x, cand_seed);
            StabilityReport rep = run_experiment(cand);
            ++best.evaluated;
            if (!admissible(rep) || !std::isfinite(rep.max_ratio)) {
                ++best.rejected;
                continue;
            }
            ++best.accepted;
            if (rep.max_ratio >= current) {
                current = rep.max_ratio;
                x = cand_x;
                pseed = cand_seed;
            }
            if (rep.max_ratio > best.worst_ratio || best.accepted == 1) {
                best.worst_ratio = rep.max_ratio;
                best.witness_config = cand;
                best.witness_report = std::move(rep);
            }
        }
    }
    return best;
}

inline json to_json(const SearchResult& s) {
    json j;
    j["worst_ratio"] = detail::number(s.worst_ratio);
    j["evaluated"] = s.evaluated;
    j["accepted"] = s.accepted;
    j["rejected"] = s.rejected;
    j["witness_pass"] = s.witness_report.pass;
    j["witness_config"] = to_json(s.witness_config);
    return j;
}

}  // namespace jensenlab::lab

#endif  // JENSENLAB_LAB_SEARCH_HPP
