#ifndef JENSENLAB_RANDOM_HPP
#define JENSENLAB_RANDOM_HPP

#include "jensenlab/space.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace jensenlab {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ULL;

/// Feeds the eight bytes of `word` (little-endian order) into an FNV-1a state.
constexpr std::uint64_t fnv1a_word(std::uint64_t state, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        state ^= (word >> (8 * i)) & 0xffULL;
        state *= kFnvPrime;
    }
    return state;
}

/// FNV-1a over the seed followed by the exact IEEE-754 bit pattern of every
/// coordinate of x.
inline std::uint64_t hash_point(std::uint64_t seed, const Vector& x) {
    std::uint64_t h = fnv1a_word(kFnvOffsetBasis, seed);
    for (Eigen::Index i = 0; i < x.size(); ++i) h = fnv1a_word(h, std::bit_cast<std::uint64_t>(x[i]));
    return h;
}

/// SplitMix64. Used for every random draw in the library so that samples are
/// reproducible across platforms and standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform in [−1, 1).
    double symmetric() { return 2.0 * uniform01() - 1.0; }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    int uniform_int(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Vector normal_vector(int dim) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = normal();
        return v;
    }

private:
    std::uint64_t state_;
};

/// Deterministic sub-seed for shard/stream `stream` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    return g.next();
}

/// Gaussian direction rescaled to unit length in the space's norm.
inline Vector random_direction(const NormedSpace& space, SplitMix64& rng) {
    for (;;) {
        Vector v = rng.normal_vector(space.dim);
        const double n = norm(space, v);
        if (n > 1e-300) return v / n;
    }
}

/// Random point with norm log-uniform in [rmin, rmax] (uniform when rmin = 0).
inline Vector random_point(const NormedSpace& space, SplitMix64& rng, double rmin, double rmax) {
    const Vector dir = random_direction(space, rng);
    double radius;
    if (rmin > 0.0 && rmax > rmin)
        radius = std::exp(rng.uniform(std::log(rmin), std::log(rmax)));
    else
        radius = rng.uniform(rmin, rmax);
    return radius * dir;
}

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.symmetric();
    return m;
}

}  // namespace jensenlab

#endif  // JENSENLAB_RANDOM_HPP
