#ifndef JENSENLAB_FUNCTION_MODEL_HPP
#define JENSENLAB_FUNCTION_MODEL_HPP

#include "jensenlab/random.hpp"
#include "jensenlab/space.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jensenlab {

/// The constant positive integers r, s, t of r·f((sx + ty)/r) = s·g(x) + t·h(y).
struct JensenParams {
    int r = 1;
    int s = 1;
    int t = 1;

    void validate() const {
        if (r < 1 || s < 1 || t < 1) throw std::invalid_argument("Jensen parameters r, s, t must be positive integers");
    }

    [[nodiscard]] double sum() const { return static_cast<double>(r + s + t); }

    friend bool operator==(const JensenParams&, const JensenParams&) = default;
};

/// Type-erased evaluable mapping between finite-dimensional spaces.
using Mapping = std::function<Vector(const Vector&)>;

enum class PerturbationKind { none, bounded, power, mixed, decaying };

inline std::string to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::none: return "none";
        case PerturbationKind::bounded: return "bounded";
        case PerturbationKind::power: return "power";
        case PerturbationKind::mixed: return "mixed";
        case PerturbationKind::decaying: return "decaying";
    }
    return "?";
}

inline PerturbationKind perturbation_from_string(const std::string& s) {
    for (auto k : {PerturbationKind::none, PerturbationKind::bounded, PerturbationKind::power, PerturbationKind::mixed,
                   PerturbationKind::decaying})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown perturbation kind '" + s + "'");
}

/// Deterministic perturbation u(x)·m(‖x‖) where u(x) is a unit vector (in the
/// codomain norm) keyed on the bit pattern of x and m is
///
///  bounded:  amplitude
///  power:    delta·‖x‖ᵖ
///  mixed:    amplitude + delta·‖x‖ᵖ
///  decaying: amplitude / (1 + ‖x‖)
///
/// The perturbation vanishes at x = 0 for every kind.
struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::none;
    double amplitude = 0.0;
    double delta = 0.0;
    double p = 0.0;
    std::uint64_t seed = 0;

    static PerturbationSpec none() { return {}; }
    static PerturbationSpec bounded(double a, std::uint64_t seed) { return checked({PerturbationKind::bounded, a, 0.0, 0.0, seed}); }
    static PerturbationSpec power(double delta, double p, std::uint64_t seed) {
        return checked({PerturbationKind::power, 0.0, delta, p, seed});
    }
    static PerturbationSpec mixed(double a, double delta, double p, std::uint64_t seed) {
        return checked({PerturbationKind::mixed, a, delta, p, seed});
    }
    static PerturbationSpec decaying(double a, std::uint64_t seed) { return checked({PerturbationKind::decaying, a, 0.0, 0.0, seed}); }

    [[nodiscard]] PerturbationSpec with_seed(std::uint64_t s) const {
        PerturbationSpec out = *this;
        out.seed = s;
        return out;
    }

    void validate() const {
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("perturbation amplitude must be finite and >= 0");
        if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("perturbation delta must be finite and >= 0");
        if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("perturbation exponent p must lie in [0, 1)");
    }

    /// Declared bound on ‖perturbation(x)‖ given ‖x‖.
    [[nodiscard]] double magnitude(double xnorm) const {
        if (xnorm == 0.0) return 0.0;
        switch (kind) {
            case PerturbationKind::none: return 0.0;
            case PerturbationKind::bounded: return amplitude;
            case PerturbationKind::power: return delta * std::pow(xnorm, p);
            case PerturbationKind::mixed: return amplitude + delta * std::pow(xnorm, p);
            case PerturbationKind::decaying: return amplitude / (1.0 + xnorm);
        }
        return 0.0;
    }

private:
    static PerturbationSpec checked(PerturbationSpec s) {
        s.validate();
        return s;
    }
};

/// Unit vector (codomain norm) derived from FNV-1a of (seed, bits of x), expanded
/// to codomain.dim values in [−1, 1) by SplitMix64.
inline Vector noise_direction(std::uint64_t seed, const Vector& x, const NormedSpace& codomain) {
    SplitMix64 gen(hash_point(seed, x));
    for (;;) {
        Vector u(codomain.dim);
        for (int i = 0; i < codomain.dim; ++i) u[i] = gen.symmetric();
        const double n = norm(codomain, u);
        if (n > 0.0) return u / n;
    }
}

/// Piecewise-linear map b : [0, ∞) → 𝒴 through (knot, value) pairs, extended
/// linearly past both ends using the outer segments.
struct RadialTable {
    std::vector<double> knots;
    std::vector<Vector> values;

    void validate(int codim) const {
        if (knots.size() < 2 || knots.size() != values.size()) throw std::invalid_argument("radial table needs >= 2 knots");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i] > knots[i - 1])) throw std::invalid_argument("radial table knots must increase");
        for (const auto& v : values)
            if (v.size() != codim) throw DimensionError("radial table value has wrong dimension");
    }

    [[nodiscard]] Vector operator()(double u) const {
        std::size_t k;
        if (u <= knots.front())
            k = 1;
        else if (u >= knots.back())
            k = knots.size() - 1;
        else
            k = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), u) - knots.begin());
        const double w = (u - knots[k - 1]) / (knots[k] - knots[k - 1]);
        return values[k - 1] + w * (values[k] - values[k - 1]);
    }
};

/// f(x) = L·x + c·‖x‖² + b(‖x‖²) + perturbation(x).
class FunctionModel {
public:
    FunctionModel(NormedSpace domain, NormedSpace codomain, Matrix linear)
        : domain_(domain), codomain_(codomain), linear_(std::move(linear)) {
        domain_.validate();
        codomain_.validate();
        if (linear_.rows() != codomain_.dim || linear_.cols() != domain_.dim)
            throw DimensionError("linear part must be codomain.dim x domain.dim");
    }

    static FunctionModel zero(NormedSpace domain, NormedSpace codomain) {
        return {domain, codomain, Matrix::Zero(codomain.dim, domain.dim)};
    }

    FunctionModel& with_quadratic(Vector c) {
        if (c.size() != codomain_.dim) throw DimensionError("quadratic coefficient must have codomain dimension");
        quadratic_ = std::move(c);
        return *this;
    }

    FunctionModel& with_radial(RadialTable b) {
        b.validate(codomain_.dim);
        radial_ = std::move(b);
        return *this;
    }

    FunctionModel& with_perturbation(PerturbationSpec p) {
        p.validate();
        perturbation_ = p;
        return *this;
    }

    FunctionModel& with_fix_origin(bool on) {
        fix_origin_ = on;
        return *this;
    }

    [[nodiscard]] const NormedSpace& domain() const { return domain_; }
    [[nodiscard]] const NormedSpace& codomain() const { return codomain_; }
    [[nodiscard]] const Matrix& linear() const { return linear_; }
    [[nodiscard]] const std::optional<Vector>& quadratic() const { return quadratic_; }
    [[nodiscard]] const std::optional<RadialTable>& radial() const { return radial_; }
    [[nodiscard]] const PerturbationSpec& perturbation_spec() const { return perturbation_; }
    [[nodiscard]] bool fix_origin() const { return fix_origin_; }

    [[nodiscard]] Vector exact_part(const Vector& x) const {
        require_dim(domain_, x, "argument");
        Vector out = linear_ * x;
        if (quadratic_ || radial_) {
            const double sq = squared_norm(domain_, x);
            if (quadratic_) out += sq * *quadratic_;
            if (radial_) out += (*radial_)(sq);
        }
        return out;
    }

    [[nodiscard]] Vector perturbation(const Vector& x) const {
        require_dim(domain_, x, "argument");
        if (perturbation_.kind == PerturbationKind::none || is_zero(x)) return Vector::Zero(codomain_.dim);
        const double m = perturbation_.magnitude(norm(domain_, x));
        if (m == 0.0) return Vector::Zero(codomain_.dim);
        return m * noise_direction(perturbation_.seed, x, codomain_);
    }

    [[nodiscard]] Vector operator()(const Vector& x) const {
        if (fix_origin_ && is_zero(x)) {
            require_dim(domain_, x, "argument");
            return Vector::Zero(codomain_.dim);
        }
        return exact_part(x) + perturbation(x);
    }

private:
    NormedSpace domain_;
    NormedSpace codomain_;
    Matrix linear_;
    std::optional<Vector> quadratic_;
    std::optional<RadialTable> radial_;
    PerturbationSpec perturbation_;
    bool fix_origin_ = true;
};

inline Vector eval(const FunctionModel& f, const Vector& x) { return f(x); }

inline FunctionModel make_perturbed_additive(const Matrix& linear, const PerturbationSpec& pert, const NormedSpace& domain,
                                             const NormedSpace& codomain) {
    FunctionModel f(domain, codomain, linear);
    f.with_perturbation(pert);
    return f;
}

inline FunctionModel make_perturbed_additive(const Matrix& linear, const PerturbationSpec& pert) {
    return make_perturbed_additive(linear, pert, NormedSpace::euclidean(static_cast<int>(linear.cols())),
                                   NormedSpace::euclidean(static_cast<int>(linear.rows())));
}

/// ‖r·f((s·x + t·y)/r) − s·g(x) − t·h(y)‖ in the codomain norm.
template <class F, class G, class H>
double jensen_defect(const F& f, const G& g, const H& h, const JensenParams& params, const NormedSpace& codomain,
                     const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionError("jensen_defect: x and y dimensions differ");
    const double r = params.r, s = params.s, t = params.t;
    const Vector mid = (s * x + t * y) / r;
    return norm(codomain, r * f(mid) - s * g(x) - t * h(y));
}

inline double jensen_defect(const FunctionModel& f, const FunctionModel& g, const FunctionModel& h,
                            const JensenParams& params, const Vector& x, const Vector& y) {
    if (!(f.codomain() == g.codomain() && f.codomain() == h.codomain() && f.domain() == g.domain() &&
          f.domain() == h.domain()))
        throw DimensionError("jensen_defect: f, g, h must share domain and codomain");
    return jensen_defect(f, g, h, params, f.codomain(), x, y);
}

/// Odd and even parts f°(x) = (f(x) − f(−x))/2 and fᵉ(x) = (f(x) + f(−x))/2.
template <class F>
std::pair<Mapping, Mapping> odd_even_split(F f) {
    Mapping odd = [f](const Vector& x) -> Vector { return (f(x) - f(Vector(-x))) / 2.0; };
    Mapping even = [f](const Vector& x) -> Vector { return (f(x) + f(Vector(-x))) / 2.0; };
    return {std::move(odd), std::move(even)};
}

// JSON description of a model (replayable).

inline nlohmann::ordered_json vector_to_json(const Vector& v) {
    auto j = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

inline Vector vector_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

inline nlohmann::ordered_json matrix_to_json(const Matrix& m) {
    auto j = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) j.push_back(vector_to_json(m.row(i).transpose()));
    return j;
}

inline Matrix matrix_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty JSON matrix (array of rows)");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != cols) throw std::invalid_argument("ragged JSON matrix");
        m.row(i) = vector_from_json(j[static_cast<std::size_t>(i)]).transpose();
    }
    return m;
}

inline nlohmann::ordered_json space_to_json(const NormedSpace& s) {
    nlohmann::ordered_json j;
    j["dim"] = s.dim;
    switch (s.kind) {
        case NormKind::euclidean: j["norm"] = "euclidean"; break;
        case NormKind::sup: j["norm"] = "sup"; break;
        case NormKind::p_norm: j["norm"] = "p"; j["p"] = s.p; break;
    }
    return j;
}

inline NormedSpace space_from_json(const nlohmann::ordered_json& j) {
    for (const auto& [key, _] : j.items())
        if (key != "dim" && key != "norm" && key != "p") throw std::invalid_argument("unknown space field '" + key + "'");
    const int dim = j.at("dim").get<int>();
    const std::string n = j.value("norm", std::string("euclidean"));
    if (n == "euclidean") return NormedSpace::euclidean(dim);
    if (n == "sup") return NormedSpace::sup(dim);
    if (n == "p") return NormedSpace::p_norm(dim, j.at("p").get<double>());
    throw std::invalid_argument("unknown norm '" + n + "'");
}

inline nlohmann::ordered_json perturbation_to_json(const PerturbationSpec& p) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(p.kind);
    j["amplitude"] = p.amplitude;
    j["delta"] = p.delta;
    j["p"] = p.p;
    j["seed"] = p.seed;
    return j;
}

inline PerturbationSpec perturbation_from_json(const nlohmann::ordered_json& j) {
    for (const auto& [key, _] : j.items())
        if (key != "kind" && key != "amplitude" && key != "delta" && key != "p" && key != "seed")
            throw std::invalid_argument("unknown perturbation field '" + key + "'");
    PerturbationSpec p;
    p.kind = perturbation_from_string(j.value("kind", std::string("none")));
    p.amplitude = j.value("amplitude", 0.0);
    p.delta = j.value("delta", 0.0);
    p.p = j.value("p", 0.0);
    p.seed = j.value("seed", std::uint64_t{0});
    p.validate();
    return p;
}

inline nlohmann::ordered_json to_json(const FunctionModel& f) {
    nlohmann::ordered_json j;
    j["domain"] = space_to_json(f.domain());
    j["codomain"] = space_to_json(f.codomain());
    j["linear"] = matrix_to_json(f.linear());
    j["quadratic"] = f.quadratic() ? vector_to_json(*f.quadratic()) : nlohmann::ordered_json(nullptr);
    if (f.radial()) {
        nlohmann::ordered_json b;
        b["knots"] = f.radial()->knots;
        auto vals = nlohmann::ordered_json::array();
        for (const auto& v : f.radial()->values) vals.push_back(vector_to_json(v));
        b["values"] = vals;
        j["radial"] = b;
    } else {
        j["radial"] = nullptr;
    }
    j["perturbation"] = perturbation_to_json(f.perturbation_spec());
    j["fix_origin"] = f.fix_origin();
    return j;
}

inline FunctionModel function_model_from_json(const nlohmann::ordered_json& j) {
    for (const auto& [key, _] : j.items())
        if (key != "domain" && key != "codomain" && key != "linear" && key != "quadratic" && key != "radial" &&
            key != "perturbation" && key != "fix_origin")
            throw std::invalid_argument("unknown model field '" + key + "'");
    FunctionModel f(space_from_json(j.at("domain")), space_from_json(j.at("codomain")), matrix_from_json(j.at("linear")));
    if (j.contains("quadratic") && !j["quadratic"].is_null()) f.with_quadratic(vector_from_json(j["quadratic"]));
    if (j.contains("radial") && !j["radial"].is_null()) {
        RadialTable b;
        b.knots = j["radial"].at("knots").get<std::vector<double>>();
        for (const auto& v : j["radial"].at("values")) b.values.push_back(vector_from_json(v));
        f.with_radial(std::move(b));
    }
    if (j.contains("perturbation")) f.with_perturbation(perturbation_from_json(j["perturbation"]));
    f.with_fix_origin(j.value("fix_origin", true));
    return f;
}

}  // namespace jensenlab

#endif  // JENSENLAB_FUNCTION_MODEL_HPP
