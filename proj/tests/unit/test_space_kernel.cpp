#include "jensenlab/orthogonality.hpp"
#include "jensenlab/random.hpp"
#include "jensenlab/ratz.hpp"
#include "jensenlab/space.hpp"

#include <catch_amalgamated.hpp>

#include <bit>
#include <cmath>

using namespace jensenlab;
using Catch::Approx;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// Brute-force min over a uniform λ grid of ‖x + λy‖ − ‖x‖.
double dense_grid_margin(const NormedSpace& space, const Vector& x, const Vector& y, double lo, double hi, int steps) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double lambda = lo + (hi - lo) * i / steps;
        best = std::min(best, norm(space, Vector(x + lambda * y)));
    }
    return best - norm(space, x);
}

// FNV-1a 64-bit over a byte string.
std::uint64_t fnv1a_bytes(const std::vector<unsigned char>& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<NormedSpace> sample_spaces(int dim) {
    return {NormedSpace::euclidean(dim), NormedSpace::sup(dim), NormedSpace::p_norm(dim, 1.0), NormedSpace::p_norm(dim, 1.5),
            NormedSpace::p_norm(dim, 3.0)};
}

}  // namespace

TEST_CASE("norm examples", "[space]") {
    CHECK(norm(NormedSpace::euclidean(2), vec({3, 4})) == Approx(5.0));
    CHECK(norm(NormedSpace::sup(2), vec({1, -2})) == 2.0);
    CHECK(norm(NormedSpace::p_norm(2, 1.0), vec({1, 1})) == Approx(2.0));
    CHECK(norm(NormedSpace::p_norm(2, 1.5), vec({0, 0})) == 0.0);
}

TEST_CASE("norm rejects dimension mismatch and invalid spaces", "[space]") {
    CHECK_THROWS_AS(norm(NormedSpace::euclidean(3), vec({1, 2})), DimensionError);
    CHECK_THROWS(NormedSpace::p_norm(2, 0.5));
    CHECK_THROWS(NormedSpace::euclidean(0));
}

TEST_CASE("only the euclidean norm carries an inner product", "[space]") {
    CHECK(NormedSpace::euclidean(2).has_inner_product());
    CHECK_FALSE(NormedSpace::sup(2).has_inner_product());
    CHECK_FALSE(NormedSpace::p_norm(2, 2.0).has_inner_product());
}

TEST_CASE("norm is absolutely homogeneous and subadditive", "[space][property]") {
    SplitMix64 rng(101);
    for (int dim = 1; dim <= 5; ++dim) {
        for (const auto& space : sample_spaces(dim)) {
            for (int k = 0; k < 200; ++k) {
                const Vector x = rng.normal_vector(dim) * std::exp(rng.uniform(-5, 5));
                const Vector y = rng.normal_vector(dim) * std::exp(rng.uniform(-5, 5));
                const double alpha = rng.uniform(-10, 10);
                const double nx = norm(space, x);
                CHECK(norm(space, Vector(alpha * x)) == Approx(std::abs(alpha) * nx).epsilon(1e-12));
                CHECK(norm(space, Vector(x + y)) <= nx + norm(space, y) + 1e-12 * (1.0 + nx + norm(space, y)));
            }
        }
    }
}

TEST_CASE("orthogonality examples", "[space][orthogonality]") {
    const auto e2 = NormedSpace::euclidean(2);
    const auto sup2 = NormedSpace::sup(2);
    const auto bj = OrthogonalityRelation::birkhoff_james();
    CHECK(is_orthogonal(OrthogonalityRelation::inner_product(), e2, vec({1, 0}), vec({0, 1})));
    CHECK_FALSE(is_orthogonal(OrthogonalityRelation::inner_product(), e2, vec({1, 0}), vec({1, 1})));
    CHECK(is_orthogonal(bj, sup2, vec({1, 0.5}), vec({0, 1})));
    CHECK_FALSE(is_orthogonal(bj, sup2, vec({0, 1}), vec({1, 0.5})));
    CHECK(is_orthogonal(OrthogonalityRelation::trivial(), e2, vec({1, 0}), vec({1, 1})));
    CHECK_FALSE(is_orthogonal(OrthogonalityRelation::trivial(), e2, vec({1, 2}), vec({-2, -4})));
    CHECK(is_orthogonal(OrthogonalityRelation::trivial(), e2, vec({0, 0}), vec({1, 1})));
}

TEST_CASE("inner-product relation requires an inner product space", "[space][orthogonality]") {
    CHECK_THROWS(is_orthogonal(OrthogonalityRelation::inner_product(), NormedSpace::sup(2), vec({1, 0}), vec({0, 1})));
    OrthogonalityRelation broken{RelationKind::birkhoff_james, std::nullopt, 1e-9};
    CHECK_THROWS(is_orthogonal(broken, NormedSpace::sup(2), vec({1, 0}), vec({0, 1})));
}

TEST_CASE("bj_margin matches a dense-grid oracle", "[space][orthogonality]") {
    const auto sup2 = NormedSpace::sup(2);
    const auto e2 = NormedSpace::euclidean(2);

    // min over λ of max(|λ|, |1 + 0.5λ|) is 2/3 at λ = −2/3.
    const double oracle = dense_grid_margin(sup2, vec({0, 1}), vec({1, 0.5}), -10.0, 10.0, 2'000'000);
    CHECK(oracle == Approx(-1.0 / 3.0).margin(1e-5));
    CHECK(bj_margin(sup2, vec({0, 1}), vec({1, 0.5})) == Approx(oracle).margin(1e-5));
    CHECK(bj_margin(sup2, vec({0, 1}), vec({1, 0.5})) == Approx(-1.0 / 3.0).margin(1e-9));

    CHECK(bj_margin(e2, vec({1, 0}), vec({0, 1})) == Approx(0.0).margin(1e-12));
    CHECK(bj_margin(sup2, vec({1, 0.5}), vec({0, 1})) == Approx(0.0).margin(1e-12));
    CHECK(bj_margin(NormedSpace::p_norm(3, 1.5), vec({1, 2, 3}), vec({0, 0, 0})) == 0.0);

    SplitMix64 rng(7);
    for (const auto& space : sample_spaces(3)) {
        for (int k = 0; k < 20; ++k) {
            const Vector x = rng.normal_vector(3), y = rng.normal_vector(3);
            const double ref = dense_grid_margin(space, x, y, -50.0, 50.0, 200'000);
            CHECK(bj_margin(space, x, y) <= ref + 1e-12);
            CHECK(bj_margin(space, x, y) == Approx(ref).margin(1e-3));
        }
    }
}

TEST_CASE("bj_margin is invariant under positive rescaling of y", "[space][property]") {
    SplitMix64 rng(9);
    for (const auto& space : sample_spaces(3)) {
        for (int k = 0; k < 50; ++k) {
            const Vector x = rng.normal_vector(3), y = rng.normal_vector(3);
            const double beta = std::exp(rng.uniform(-3, 3));
            const LambdaGrid grid;
            const double a = bj_margin(space, x, y, grid);
            const double b = bj_margin(space, x, Vector(beta * y), grid.scaled(1.0 / beta));
            CHECK(a == Approx(b).margin(1e-9 * (1.0 + norm(space, x))));
        }
    }
}

TEST_CASE("Birkhoff-James agrees with the inner product in euclidean space", "[space][property]") {
    SplitMix64 rng(11);
    const auto bj = OrthogonalityRelation::birkhoff_james({}, 1e-9);
    const auto ip = OrthogonalityRelation::inner_product(1e-6);
    int disagreements = 0, orthogonal = 0;
    for (int k = 0; k < 10'000; ++k) {
        const int dim = 2 + k % 3;
        const auto space = NormedSpace::euclidean(dim);
        const Vector x = rng.normal_vector(dim);
        Vector y = rng.normal_vector(dim);
        if (k % 2 == 0) y -= (x.dot(y) / x.squaredNorm()) * x;
        const bool a = is_orthogonal(bj, space, x, y);
        const bool b = is_orthogonal(ip, space, x, y);
        orthogonal += b;
        disagreements += (a != b);
    }
    CHECK(disagreements == 0);
    CHECK(orthogonal >= 4'900);
}

TEST_CASE("o4_witness examples", "[space][orthogonality]") {
    const auto e2 = NormedSpace::euclidean(2);
    const Vector p1 = vec({1, 0}), p2 = vec({0, 1});
    CHECK(o4_witness(e2, p1, p2, vec({1, 0}), 1.0).isApprox(vec({0, 1}), 1e-14));
    CHECK(o4_witness(e2, p1, p2, vec({1, 0}), 4.0).isApprox(vec({0, 2}), 1e-14));
    CHECK(o4_witness(e2, p1, p2, vec({3, 4}), 1.0).isApprox(vec({-4, 3}), 1e-14));
    CHECK_THROWS(o4_witness(e2, p1, p2, vec({0, 0}), 1.0));
    CHECK_THROWS(o4_witness(e2, p1, Vector(2.0 * p1), vec({1, 0}), 1.0));
    CHECK_THROWS(o4_witness(NormedSpace::sup(2), p1, p2, vec({1, 0}), 1.0));
}

TEST_CASE("o4_witness satisfies both orthogonality conditions", "[space][property]") {
    SplitMix64 rng(13);
    for (int k = 0; k < 2000; ++k) {
        const int dim = 2 + k % 4;
        const auto space = NormedSpace::euclidean(dim);
        const Vector p1 = rng.normal_vector(dim), p2 = rng.normal_vector(dim);
        const double a = rng.normal(), b = rng.normal();
        const Vector x = a * p1 + b * p2;
        const double lambda = std::exp(rng.uniform(-2, 2));
        const Vector y0 = o4_witness(space, p1, p2, x, lambda);
        const double scale = x.squaredNorm() * (1.0 + lambda);
        CHECK(std::abs(x.dot(y0)) <= 1e-10 * scale);
        CHECK(std::abs((x + y0).dot(lambda * x - y0)) <= 1e-10 * scale);
        // y0 lies in span{p1, p2}
        Matrix basis(dim, 2);
        basis << p1, p2;
        const Vector coeffs = basis.colPivHouseholderQr().solve(y0);
        CHECK((basis * coeffs - y0).norm() <= 1e-9 * (1.0 + y0.norm()));
    }
}

TEST_CASE("Ratz axioms for the three relations", "[space][ratz]") {
    for (int dim = 2; dim <= 5; ++dim) {
        const auto rep = check_ratz_axioms(OrthogonalityRelation::inner_product(), NormedSpace::euclidean(dim), 1000, 17);
        CHECK(rep.all_pass());
        CHECK(rep.o4.applicable);
        CHECK(rep.o4.pass);
    }
    const auto trivial = check_ratz_axioms(OrthogonalityRelation::trivial(), NormedSpace::euclidean(3), 1000, 19);
    CHECK(trivial.o1.pass);
    CHECK(trivial.o2.pass);
    CHECK(trivial.o3.pass);

    const auto bj = check_ratz_axioms(OrthogonalityRelation::birkhoff_james(), NormedSpace::euclidean(2), 300, 23);
    CHECK(bj.o1.pass);
    CHECK(bj.o3.pass);
}

TEST_CASE("Ratz check is deterministic given the seed", "[space][ratz]") {
    const auto a = check_ratz_axioms(OrthogonalityRelation::birkhoff_james(), NormedSpace::sup(2), 100, 5);
    const auto b = check_ratz_axioms(OrthogonalityRelation::birkhoff_james(), NormedSpace::sup(2), 100, 5);
    CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("linear independence uses a relative rank threshold", "[space]") {
    CHECK(linearly_independent(vec({1, 0}), vec({0, 1})));
    CHECK_FALSE(linearly_independent(vec({1, 2}), vec({2, 4})));
    CHECK_FALSE(linearly_independent(vec({1e8, 0}), vec({1e8, 1e-4})));
    CHECK(pair_rank(vec({0, 0}), vec({0, 0})) == 0);
}

TEST_CASE("hash_point is FNV-1a over the seed and coordinate bits", "[random]") {
    const Vector x = vec({1.5, -0.0, 3e-310});
    const std::uint64_t seed = 0x0123456789abcdefULL;
    std::vector<unsigned char> bytes;
    auto push = [&](std::uint64_t w) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<unsigned char>((w >> (8 * i)) & 0xff));
    };
    push(seed);
    for (Eigen::Index i = 0; i < x.size(); ++i) push(std::bit_cast<std::uint64_t>(x[i]));
    CHECK(hash_point(seed, x) == fnv1a_bytes(bytes));
    CHECK(hash_point(seed, vec({0.0})) != hash_point(seed, vec({-0.0})));
}

TEST_CASE("SplitMix64 reference stream", "[random]") {
    // First outputs for seed 0 of the published SplitMix64 generator.
    SplitMix64 g(0);
    CHECK(g.next() == 0xe220a8397b1dcdafULL);
    CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(g.next() == 0x06c45d188009454fULL);
    SplitMix64 a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());
}
