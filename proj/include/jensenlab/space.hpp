#ifndef JENSENLAB_SPACE_HPP
#define JENSENLAB_SPACE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jensenlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class NormKind { euclidean, sup, p_norm };

/// Finite-dimensional real normed space. Only the Euclidean kind carries an
/// inner product.
struct NormedSpace {
    int dim = 1;
    NormKind kind = NormKind::euclidean;
    double p = 2.0;

    static NormedSpace euclidean(int d) { return checked({d, NormKind::euclidean, 2.0}); }
    static NormedSpace sup(int d) { return checked({d, NormKind::sup, 0.0}); }
    static NormedSpace p_norm(int d, double p) { return checked({d, NormKind::p_norm, p}); }

    [[nodiscard]] bool has_inner_product() const { return kind == NormKind::euclidean; }

    void validate() const {
        if (dim < 1) throw std::invalid_argument("space dimension must be >= 1");
        if (kind == NormKind::p_norm && !(p >= 1.0 && std::isfinite(p)))
            throw std::invalid_argument("p-norm requires finite p >= 1");
    }

    [[nodiscard]] std::string describe() const {
        switch (kind) {
            case NormKind::euclidean: return "euclidean(" + std::to_string(dim) + ")";
            case NormKind::sup: return "sup(" + std::to_string(dim) + ")";
            case NormKind::p_norm: return "p_norm(" + std::to_string(dim) + ", p=" + std::to_string(p) + ")";
        }
        return "?";
    }

    friend bool operator==(const NormedSpace& a, const NormedSpace& b) {
        return a.dim == b.dim && a.kind == b.kind && (a.kind != NormKind::p_norm || a.p == b.p);
    }

private:
    static NormedSpace checked(NormedSpace s) {
        s.validate();
        return s;
    }
};

inline void require_dim(const NormedSpace& space, const Vector& x, const char* what = "vector") {
    if (x.size() != space.dim)
        throw DimensionError(std::string(what) + " has dimension " + std::to_string(x.size()) +
                             ", space has dimension " + std::to_string(space.dim));
}

inline void require_finite(const Vector& x, const char* what = "vector") {
    if (!x.allFinite()) throw std::domain_error(std::string(what) + " has non-finite coordinates");
}

inline bool is_zero(const Vector& x) { return (x.array() == 0.0).all(); }

inline double norm(const NormedSpace& space, const Vector& x) {
    require_dim(space, x);
    switch (space.kind) {
        case NormKind::euclidean: return x.norm();
        case NormKind::sup: return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
        case NormKind::p_norm: {
            const double scale = x.cwiseAbs().maxCoeff();
            if (scale == 0.0) return 0.0;
            if (space.p == 1.0) return x.cwiseAbs().sum();
            double acc = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / scale, space.p);
            return scale * std::pow(acc, 1.0 / space.p);
        }
    }
    return 0.0;
}

/// ‖x‖². Euclidean spaces use the sum of squares directly, so scaling x by a
/// power of two scales the result exactly.
inline double squared_norm(const NormedSpace& space, const Vector& x) {
    if (space.kind == NormKind::euclidean) {
        require_dim(space, x);
        return x.squaredNorm();
    }
    const double n = norm(space, x);
    return n * n;
}

inline double inner(const NormedSpace& space, const Vector& x, const Vector& y) {
    if (!space.has_inner_product()) throw std::invalid_argument("space " + space.describe() + " has no inner product");
    require_dim(space, x);
    require_dim(space, y);
    return x.dot(y);
}

/// A functional F of dual norm one with F(x) = ‖x‖ (a subgradient of the norm
/// at x). For ties in the sup norm the first maximal coordinate is used.
inline Vector norming_functional(const NormedSpace& space, const Vector& x) {
    require_dim(space, x);
    Vector f = Vector::Zero(space.dim);
    const double nx = norm(space, x);
    if (nx == 0.0) {
        f[0] = 1.0;
        return f;
    }
    switch (space.kind) {
        case NormKind::euclidean: return x / nx;
        case NormKind::sup: {
            Eigen::Index arg = 0;
            x.cwiseAbs().maxCoeff(&arg);
            f[arg] = x[arg] > 0 ? 1.0 : -1.0;
            return f;
        }
        case NormKind::p_norm: {
            if (space.p == 1.0) {
                for (Eigen::Index i = 0; i < x.size(); ++i) f[i] = x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
                return f;
            }
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double a = std::abs(x[i]) / nx;
                f[i] = (x[i] >= 0 ? 1.0 : -1.0) * std::pow(a, space.p - 1.0);
            }
            return f;
        }
    }
    return f;
}

/// Numerical rank of the columns [a b] via singular values, threshold
/// rel_threshold · σ_max.
inline int pair_rank(const Vector& a, const Vector& b, double rel_threshold = 1e-10) {
    Matrix m(a.size(), 2);
    m.col(0) = a;
    m.col(1) = b;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_threshold * sv[0]) ++rank;
    return rank;
}

inline bool linearly_independent(const Vector& a, const Vector& b) { return pair_rank(a, b) == 2; }

}  // namespace jensenlab

#endif  // JENSENLAB_SPACE_HPP
