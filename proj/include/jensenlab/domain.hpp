#ifndef JENSENLAB_DOMAIN_HPP
#define JENSENLAB_DOMAIN_HPP

#include "jensenlab/orthogonality.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace jensenlab {

enum class DomainKind { full, exterior, punctured, orthogonal };

inline std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::full: return "full";
        case DomainKind::exterior: return "exterior";
        case DomainKind::punctured: return "punctured";
        case DomainKind::orthogonal: return "orthogonal";
    }
    return "?";
}

inline DomainKind domain_kind_from_string(const std::string& s) {
    for (auto k : {DomainKind::full, DomainKind::exterior, DomainKind::punctured, DomainKind::orthogonal})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown domain kind '" + s + "'");
}

/// Set of pairs (x, y) on which a hypothesis is imposed.
struct DomainRestriction {
    DomainKind kind = DomainKind::full;
    double d = 0.0;
    std::optional<OrthogonalityRelation> relation;

    static DomainRestriction full() { return {}; }
    static DomainRestriction exterior(double d) { return checked({DomainKind::exterior, d, std::nullopt}); }
    static DomainRestriction punctured() { return {DomainKind::punctured, 0.0, std::nullopt}; }
    static DomainRestriction orthogonal(OrthogonalityRelation rel) {
        return checked({DomainKind::orthogonal, 0.0, std::move(rel)});
    }

    void validate() const {
        if (kind == DomainKind::exterior && !(d > 0.0 && std::isfinite(d)))
            throw std::invalid_argument("exterior domain needs d > 0");
        if (kind == DomainKind::orthogonal && !relation) throw std::invalid_argument("orthogonal domain needs a relation");
    }

private:
    static DomainRestriction checked(DomainRestriction r) {
        r.validate();
        return r;
    }
};

inline bool in_domain(const DomainRestriction& dom, const NormedSpace& space, const Vector& x, const Vector& y) {
    require_dim(space, x, "x");
    require_dim(space, y, "y");
    switch (dom.kind) {
        case DomainKind::full: return true;
        case DomainKind::exterior: return norm(space, x) + norm(space, y) >= dom.d;
        case DomainKind::punctured: return !is_zero(x) && !is_zero(y);
        case DomainKind::orthogonal: return is_orthogonal(*dom.relation, space, x, y);
    }
    return false;
}

}  // namespace jensenlab

#endif  // JENSENLAB_DOMAIN_HPP
