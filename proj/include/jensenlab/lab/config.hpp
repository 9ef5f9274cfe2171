#ifndef JENSENLAB_LAB_CONFIG_HPP
#define JENSENLAB_LAB_CONFIG_HPP

#include "jensenlab/control.hpp"
#include "jensenlab/domain.hpp"
#include "jensenlab/function_model.hpp"
#include "jensenlab/limits.hpp"
#include "jensenlab/restricted.hpp"
#include "jensenlab/sampling.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jensenlab::lab {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TheoremId { thm2_1, cor2_2, thm3_1, cor3_2, prop4_1, prop4_2, thm4_3, thm5_2, thm6_1, thm6_2 };

inline constexpr TheoremId kAllTheorems[] = {TheoremId::thm2_1, TheoremId::cor2_2, TheoremId::thm3_1, TheoremId::cor3_2,
                                             TheoremId::prop4_1, TheoremId::prop4_2, TheoremId::thm4_3, TheoremId::thm5_2,
                                             TheoremId::thm6_1, TheoremId::thm6_2};

inline std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::thm2_1: return "thm2_1";
        case TheoremId::cor2_2: return "cor2_2";
        case TheoremId::thm3_1: return "thm3_1";
        case TheoremId::cor3_2: return "cor3_2";
        case TheoremId::prop4_1: return "prop4_1";
        case TheoremId::prop4_2: return "prop4_2";
        case TheoremId::thm4_3: return "thm4_3";
        case TheoremId::thm5_2: return "thm5_2";
        case TheoremId::thm6_1: return "thm6_1";
        case TheoremId::thm6_2: return "thm6_2";
    }
    return "?";
}

inline TheoremId theorem_from_string(const std::string& s) {
    for (auto id : kAllTheorems)
        if (to_string(id) == s) return id;
    throw ConfigError("unknown theorem id '" + s + "'");
}

/// Domain on which the theorem imposes its hypothesis.
inline DomainKind hypothesis_domain(TheoremId id) {
    switch (id) {
        case TheoremId::thm2_1:
        case TheoremId::cor2_2:
        case TheoremId::cor3_2: return DomainKind::full;
        case TheoremId::thm3_1: return DomainKind::exterior;
        case TheoremId::prop4_1:
        case TheoremId::prop4_2:
        case TheoremId::thm4_3: return DomainKind::punctured;
        case TheoremId::thm5_2:
        case TheoremId::thm6_1:
        case TheoremId::thm6_2: return DomainKind::orthogonal;
    }
    return DomainKind::full;
}

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    TheoremId theorem = TheoremId::thm2_1;
    NormedSpace space = NormedSpace::euclidean(2);
    NormedSpace codomain = NormedSpace::euclidean(2);
    JensenParams params;
    ControlFunctionSpec control = ControlFunctionSpec::constant(0.0);
    PerturbationSpec perturbation;
    bool pexider = false;
    std::optional<Matrix> linear;
    std::uint64_t linear_seed = 0;
    std::optional<Vector> quadratic;
    std::optional<Vector> offset;
    DomainRestriction domain;
    SamplerSpec sampler;
    std::optional<LimitSettings> limits;
    double ball_radius = 1.0;
    std::optional<ShellSpec> shells;
    std::vector<Vector> eval_points;
    std::optional<int> interior_count;
    double residual_tol = 1e-6;
    double report_tol = 1e-7;

    /// Explicit linear part, or a matrix drawn from linear_seed.
    [[nodiscard]] Matrix linear_part() const {
        if (linear) return *linear;
        return random_matrix(codomain.dim, space.dim, linear_seed);
    }

    /// Configured limits, else the per-theorem default. Power growth ‖x‖ᵖ in
    /// the control or perturbation slows the contraction to base^{(p−1)n}, so
    /// n_max is stretched by 1/(1 − p).
    [[nodiscard]] LimitSettings effective_limits() const {
        if (limits) return *limits;
        double p = std::clamp(control.growth_exponent(), 0.0, 0.9);
        if (perturbation.kind == PerturbationKind::power || perturbation.kind == PerturbationKind::mixed)
            p = std::max(p, std::min(perturbation.p, 0.9));
        const double stretch = 1.0 / (1.0 - p);
        switch (theorem) {
            case TheoremId::thm2_1:
            case TheoremId::cor2_2: return {std::max(40, static_cast<int>(std::ceil(60.0 * stretch))), 1e-9};
            case TheoremId::prop4_1:
            case TheoremId::prop4_2:
            case TheoremId::thm4_3: return {std::max(25, static_cast<int>(std::ceil(38.0 * stretch))), 1e-9};
            case TheoremId::thm5_2: return {40, 1e-6};
            default: return {40, 1e-9};
        }
    }

    [[nodiscard]] int interior_samples() const { return interior_count.value_or(sampler.count); }

    void validate() const {
        if (schema_version != kSchemaVersion)
            throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
        try {
            space.validate();
            codomain.validate();
            params.validate();
            control.validate();
            perturbation.validate();
            domain.validate();
            sampler.validate();
            if (shells) shells->validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (linear && (linear->rows() != codomain.dim || linear->cols() != space.dim))
            throw ConfigError("linear must be codomain.dim x space.dim");
        if (quadratic && quadratic->size() != codomain.dim) throw ConfigError("quadratic must have codomain dimension");
        if (offset && offset->size() != codomain.dim) throw ConfigError("offset must have codomain dimension");
        for (const auto& x : eval_points)
            if (x.size() != space.dim || !x.allFinite()) throw ConfigError("eval point has wrong dimension or is not finite");
        if (limits && (limits->n_max < 1 || !(limits->tol > 0.0))) throw ConfigError("limits need n_max >= 1 and tol > 0");
        if (!(ball_radius > 0.0)) throw ConfigError("ball_radius must be > 0");
        if (interior_count && *interior_count < 1) throw ConfigError("interior_count must be >= 1");
        if (!(residual_tol > 0.0) || !(report_tol >= 0.0)) throw ConfigError("tolerances must be positive");
        if (domain.kind != hypothesis_domain(theorem))
            throw ConfigError("domain '" + jensenlab::to_string(domain.kind) + "' does not match theorem " +
                              to_string(theorem));
        if (theorem == TheoremId::cor3_2 && !shells) throw ConfigError("cor3_2 needs a shells block");
        if (domain.kind == DomainKind::orthogonal) {
            if (space.dim < 2) throw ConfigError("orthogonal experiments need dim >= 2");
            if (domain.relation->kind == RelationKind::inner_product && !space.has_inner_product())
                throw ConfigError("inner-product relation needs a euclidean space");
        }
        if ((theorem == TheoremId::thm6_1 || theorem == TheoremId::thm6_2) &&
            (!space.has_inner_product() || domain.relation->kind != RelationKind::inner_product))
            throw ConfigError("ball decomposition needs a euclidean space with the inner-product relation");
        if (theorem == TheoremId::thm6_2 && params.s != params.t) throw ConfigError("thm6_2 needs s = t");
        const bool needs_constant = theorem == TheoremId::thm3_1 || theorem == TheoremId::cor3_2 ||
                                    theorem == TheoremId::thm4_3 || theorem == TheoremId::thm5_2 ||
                                    theorem == TheoremId::thm6_1 || theorem == TheoremId::thm6_2;
        if (needs_constant && control.kind != ControlKind::constant)
            throw ConfigError(to_string(theorem) + " needs a constant control function");
        if (theorem == TheoremId::cor2_2 && control.kind == ControlKind::table)
            throw ConfigError("cor2_2 needs a constant or mixed control function");
    }
};

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown field '" + key + "' in " + where);
    }
}

inline json control_to_json(const ControlFunctionSpec& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["epsilon"] = c.epsilon;
    if (c.kind == ControlKind::mixed) {
        j["delta"] = c.delta;
        j["p"] = c.p;
    }
    if (c.kind == ControlKind::table) {
        j["knots"] = c.knots;
        j["values"] = c.values;
        j["q"] = c.q;
    }
    return j;
}

inline ControlFunctionSpec control_from_json(const json& j) {
    reject_unknown(j, {"kind", "epsilon", "delta", "p", "knots", "values", "q"}, "control");
    const std::string kind = j.value("kind", std::string("constant"));
    const double eps = j.value("epsilon", 0.0);
    if (kind == "constant") return ControlFunctionSpec::constant(eps);
    if (kind == "mixed") return ControlFunctionSpec::mixed(eps, j.at("delta").get<double>(), j.at("p").get<double>());
    if (kind == "table")
        return ControlFunctionSpec::table(j.at("knots").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(),
                                          j.at("q").get<double>(), eps);
    throw ConfigError("unknown control kind '" + kind + "'");
}

inline json grid_to_json(const LambdaGrid& g) {
    json j;
    j["lambda_min"] = g.lambda_min;
    j["lambda_max"] = g.lambda_max;
    j["steps"] = g.steps;
    return j;
}

inline json domain_to_json(const DomainRestriction& d) {
    json j;
    j["kind"] = to_string(d.kind);
    if (d.kind == DomainKind::exterior) j["d"] = d.d;
    if (d.kind == DomainKind::orthogonal) {
        j["relation"] = to_string(d.relation->kind);
        j["tolerance"] = d.relation->tolerance;
        if (d.relation->bj_grid) j["grid"] = grid_to_json(*d.relation->bj_grid);
    }
    return j;
}

inline DomainRestriction domain_from_json(const json& j) {
    reject_unknown(j, {"kind", "d", "relation", "tolerance", "grid"}, "domain");
    const DomainKind kind = domain_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
        case DomainKind::full: return DomainRestriction::full();
        case DomainKind::punctured: return DomainRestriction::punctured();
        case DomainKind::exterior: return DomainRestriction::exterior(j.at("d").get<double>());
        case DomainKind::orthogonal: {
            const RelationKind rk = relation_from_string(j.value("relation", std::string("inner")));
            const double tol = j.value("tolerance", 1e-9);
            if (!(tol > 0.0)) throw ConfigError("relation tolerance must be > 0");
            OrthogonalityRelation rel{rk, std::nullopt, tol};
            if (rk == RelationKind::birkhoff_james) {
                LambdaGrid g;
                if (j.contains("grid")) {
                    reject_unknown(j["grid"], {"lambda_min", "lambda_max", "steps"}, "domain.grid");
                    g.lambda_min = j["grid"].value("lambda_min", g.lambda_min);
                    g.lambda_max = j["grid"].value("lambda_max", g.lambda_max);
                    g.steps = j["grid"].value("steps", g.steps);
                }
                g.validate();
                rel.bj_grid = g;
            }
            return DomainRestriction::orthogonal(rel);
        }
    }
    throw ConfigError("unreachable domain kind");
}

inline DomainRestriction default_domain(TheoremId id) {
    switch (hypothesis_domain(id)) {
        case DomainKind::full: return DomainRestriction::full();
        case DomainKind::punctured: return DomainRestriction::punctured();
        case DomainKind::orthogonal: return DomainRestriction::orthogonal(OrthogonalityRelation::inner_product());
        case DomainKind::exterior: throw ConfigError(to_string(id) + " needs an explicit exterior domain with d");
    }
    return DomainRestriction::full();
}

}  // namespace detail

/// Canonical JSON form; parse(to_json(c)) reproduces c.
inline json to_json(const ExperimentConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["theorem"] = to_string(c.theorem);
    j["space"] = space_to_json(c.space);
    j["codomain"] = space_to_json(c.codomain);
    j["params"] = {{"r", c.params.r}, {"s", c.params.s}, {"t", c.params.t}};
    j["control"] = detail::control_to_json(c.control);
    j["perturbation"] = perturbation_to_json(c.perturbation);
    j["pexider"] = c.pexider;
    if (c.linear)
        j["linear"] = matrix_to_json(*c.linear);
    else
        j["linear_seed"] = c.linear_seed;
    if (c.quadratic) j["quadratic"] = vector_to_json(*c.quadratic);
    if (c.offset) j["offset"] = vector_to_json(*c.offset);
    j["domain"] = detail::domain_to_json(c.domain);
    j["sampler"] = {{"count", c.sampler.count},
                    {"seed", c.sampler.seed},
                    {"radius_min", c.sampler.radius_min},
                    {"radius_max", c.sampler.radius_max}};
    if (c.limits) j["limits"] = {{"n_max", c.limits->n_max}, {"tol", c.limits->tol}};
    j["ball_radius"] = c.ball_radius;
    if (c.shells) {
        j["shells"] = {{"edges", c.shells->edges},
                       {"samples_per_shell", c.shells->samples_per_shell},
                       {"min_split", c.shells->min_split},
                       {"seed", c.shells->seed}};
    }
    if (!c.eval_points.empty()) {
        auto pts = json::array();
        for (const auto& x : c.eval_points) pts.push_back(vector_to_json(x));
        j["eval_points"] = pts;
    }
    if (c.interior_count) j["interior_count"] = *c.interior_count;
    j["residual_tol"] = c.residual_tol;
    j["report_tol"] = c.report_tol;
    return j;
}

inline ExperimentConfig config_from_json(const json& j) {
    try {
        detail::reject_unknown(j,
                               {"schema_version", "theorem", "space", "codomain", "params", "control", "perturbation",
                                "pexider", "linear", "linear_seed", "quadratic", "offset", "domain", "sampler", "limits",
                                "ball_radius", "shells", "eval_points", "interior_count", "residual_tol", "report_tol"},
                               "config");
        if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
        ExperimentConfig c;
        c.schema_version = j.at("schema_version").get<int>();
        if (c.schema_version != kSchemaVersion)
            throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
        c.theorem = theorem_from_string(j.at("theorem").get<std::string>());
        c.space = space_from_json(j.at("space"));
        c.codomain = j.contains("codomain") ? space_from_json(j["codomain"]) : c.space;
        if (j.contains("params")) {
            detail::reject_unknown(j["params"], {"r", "s", "t"}, "params");
            c.params = {j["params"].at("r").get<int>(), j["params"].at("s").get<int>(), j["params"].at("t").get<int>()};
        }
        if (j.contains("control")) c.control = detail::control_from_json(j["control"]);
        if (j.contains("perturbation")) c.perturbation = perturbation_from_json(j["perturbation"]);
        if (c.perturbation.kind != PerturbationKind::none && !j["perturbation"].contains("seed"))
            throw ConfigError("perturbation needs an explicit seed");
        c.pexider = j.value("pexider", false);
        if (j.contains("linear") && j.contains("linear_seed")) throw ConfigError("give either linear or linear_seed, not both");
        if (j.contains("linear")) c.linear = matrix_from_json(j["linear"]);
        c.linear_seed = j.value("linear_seed", std::uint64_t{0});
        if (j.contains("quadratic")) c.quadratic = vector_from_json(j["quadratic"]);
        if (j.contains("offset")) c.offset = vector_from_json(j["offset"]);
        c.domain = j.contains("domain") ? detail::domain_from_json(j["domain"]) : detail::default_domain(c.theorem);
        if (!j.contains("sampler") || !j["sampler"].contains("seed")) throw ConfigError("sampler.seed is mandatory");
        detail::reject_unknown(j["sampler"], {"count", "seed", "radius_min", "radius_max"}, "sampler");
        c.sampler.count = j["sampler"].value("count", c.sampler.count);
        c.sampler.seed = j["sampler"].at("seed").get<std::uint64_t>();
        c.sampler.radius_min = j["sampler"].value("radius_min", c.sampler.radius_min);
        c.sampler.radius_max = j["sampler"].value("radius_max", c.sampler.radius_max);
        if (j.contains("limits")) {
            detail::reject_unknown(j["limits"], {"n_max", "tol"}, "limits");
            c.limits = LimitSettings{j["limits"].value("n_max", 40), j["limits"].value("tol", 1e-9)};
        }
        c.ball_radius = j.value("ball_radius", 1.0);
        if (j.contains("shells")) {
            detail::reject_unknown(j["shells"], {"edges", "samples_per_shell", "min_split", "seed"}, "shells");
            ShellSpec s;
            s.edges = j["shells"].at("edges").get<std::vector<double>>();
            s.samples_per_shell = j["shells"].value("samples_per_shell", s.samples_per_shell);
            s.min_split = j["shells"].value("min_split", 0.0);
            s.seed = j["shells"].value("seed", c.sampler.seed);
            c.shells = s;
        }
        if (j.contains("eval_points"))
            for (const auto& p : j["eval_points"]) c.eval_points.push_back(vector_from_json(p));
        if (j.contains("interior_count")) c.interior_count = j["interior_count"].get<int>();
        c.residual_tol = j.value("residual_tol", 1e-6);
        c.report_tol = j.value("report_tol", 1e-7);
        c.validate();
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

inline ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace jensenlab::lab

#endif  // JENSENLAB_LAB_CONFIG_HPP
