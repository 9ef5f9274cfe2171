#include "jensenlab/domain.hpp"
#include "jensenlab/function_model.hpp"
#include "jensenlab/random.hpp"
#include "jensenlab/restricted.hpp"
#include "jensenlab/sampling.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace jensenlab;
using Catch::Approx;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

std::vector<NormedSpace> norms(int dim) {
    return {NormedSpace::euclidean(dim), NormedSpace::sup(dim), NormedSpace::p_norm(dim, 1.5)};
}

// The five left-hand sides written out from the inequality list.
std::array<double, 5> five_lhs_oracle(const NormedSpace& sp, const Vector& x, const Vector& y, const Vector& z,
                                      const JensenParams& p) {
    const double ts = static_cast<double>(p.t) / p.s, st = static_cast<double>(p.s) / p.t;
    auto n = [&](const Vector& v) { return norm(sp, v); };
    const Vector a = (2 + ts) * z + ts * y;
    const Vector b = st * x - (1 + 2 * st) * z;
    const Vector w = 2 * (1 + ts) * z;
    return {n(a) + n(b), n(x) + n(z), n(w) + n(y), n(w) + n(b), n(a) + n(z)};
}

}  // namespace

TEST_CASE("in_domain examples", "[domain]") {
    const auto e2 = NormedSpace::euclidean(2);
    CHECK(in_domain(DomainRestriction::exterior(2.0), e2, vec({1, 0}), vec({0, 1.5})));
    CHECK_FALSE(in_domain(DomainRestriction::exterior(2.0), e2, vec({1, 0}), vec({0, 0.5})));
    CHECK_FALSE(in_domain(DomainRestriction::punctured(), e2, vec({0, 0}), vec({1, 0})));
    CHECK(in_domain(DomainRestriction::punctured(), e2, vec({1, 0}), vec({1, 0})));
    CHECK(in_domain(DomainRestriction::orthogonal(OrthogonalityRelation::inner_product()), e2, vec({1, 0}), vec({0, 1})));
    CHECK(in_domain(DomainRestriction::full(), e2, vec({0, 0}), vec({0, 0})));
    CHECK_THROWS(DomainRestriction::exterior(0.0));
}

TEST_CASE("sampled pairs lie in their domain", "[domain][sampling]") {
    const JensenParams p{3, 2, 1};
    SamplerSpec sampler;
    sampler.count = 500;
    sampler.seed = 5;
    for (const auto& sp : norms(2)) {
        for (const auto& dom : {DomainRestriction::full(), DomainRestriction::exterior(3.0), DomainRestriction::punctured(),
                                DomainRestriction::orthogonal(OrthogonalityRelation::birkhoff_james())}) {
            const auto pairs = sample_pairs(dom, sp, sampler, p);
            CHECK(pairs.size() >= 500);
            for (const auto& [x, y] : pairs) CHECK(in_domain(dom, sp, x, y));
        }
    }
}

TEST_CASE("construct_z examples", "[restricted]") {
    const auto e2 = NormedSpace::euclidean(2);
    CHECK(construct_z(vec({0, 0}), vec({0, 0}), 2.0, e2).isApprox(vec({2, 0})));
    CHECK(construct_z(vec({1, 0}), vec({0, 0}), 2.0, e2).isApprox(vec({3, 0})));
    CHECK(construct_z(vec({0, 0.5}), vec({1, 0}), 4.0, NormedSpace::sup(2)).isApprox(vec({5, 0})));
    // tie goes to the x-branch
    CHECK(construct_z(vec({1, 0}), vec({0, 1}), 3.0, e2).isApprox(vec({4, 0})));
    CHECK_THROWS(construct_z(vec({1, 0}), vec({0, 0}), 0.0, e2));
}

TEST_CASE("five inequalities examples", "[restricted]") {
    const auto e2 = NormedSpace::euclidean(2);
    const JensenParams p{1, 1, 1};
    const auto res = verify_five_inequalities(vec({1, 0}), vec({0, 0}), vec({3, 0}), 2.0, p, e2);
    CHECK(res.all_pass());
    CHECK(res.lhs[1] == Approx(4.0));
    const auto oracle = five_lhs_oracle(e2, vec({1, 0}), vec({0, 0}), vec({3, 0}), p);
    for (int i = 0; i < 5; ++i) CHECK(res.lhs[static_cast<std::size_t>(i)] == Approx(oracle[static_cast<std::size_t>(i)]));

    const double d = 2.5;
    const Vector z = construct_z(vec({0, 0}), vec({0, 0}), d, e2);
    const auto origin = verify_five_inequalities(vec({0, 0}), vec({0, 0}), z, d, JensenParams{2, 3, 1}, e2);
    CHECK(origin.all_pass());
    CHECK(origin.min_margin() >= -1e-12);
}

TEST_CASE("five inequalities hold on random interior pairs", "[restricted][property]") {
    SplitMix64 rng(51);
    int failures = 0, draws = 0;
    for (int k = 0; k < 100'000; ++k) {
        const int dim = 1 + k % 4;
        const auto sp = norms(dim)[static_cast<std::size_t>(k % 3)];
        const double d = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
        const JensenParams p{rng.uniform_int(1, 4), rng.uniform_int(1, 4), rng.uniform_int(1, 4)};
        const double total = d * rng.uniform01() * (1 - 1e-12);
        const double lam = rng.uniform01();
        const Vector x = lam * total * random_direction(sp, rng);
        const Vector y = (1 - lam) * total * random_direction(sp, rng);
        const Vector z = construct_z(x, y, d, sp);
        CHECK(norm(sp, z) >= d * (1 - 1e-12));
        const auto res = verify_five_inequalities(x, y, z, d, p, sp);
        const auto oracle = five_lhs_oracle(sp, x, y, z, p);
        for (std::size_t i = 0; i < 5; ++i) {
            if (oracle[i] < d * (1 - 1e-12)) ++failures;
            if (std::abs(res.lhs[i] - oracle[i]) > 1e-12 * (1 + oracle[i])) ++failures;
        }
        ++draws;
    }
    CHECK(draws == 100'000);
    CHECK(failures == 0);
}

TEST_CASE("five-term chain telescopes to the direct defect", "[restricted][property]") {
    SplitMix64 rng(53);
    for (int k = 0; k < 10'000; ++k) {
        const auto sp = norms(2)[static_cast<std::size_t>(k % 3)];
        const JensenParams p{rng.uniform_int(1, 5), rng.uniform_int(1, 5), rng.uniform_int(1, 5)};
        const double d = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
        const auto f = make_perturbed_additive(random_matrix(1, 2, 3), PerturbationSpec::bounded(0.2, 100 + k), sp,
                                               NormedSpace::euclidean(1));
        const Vector x = 0.45 * d * rng.uniform01() * random_direction(sp, rng);
        const Vector y = 0.45 * d * rng.uniform01() * random_direction(sp, rng);
        const Vector z = construct_z(x, y, d, sp);
        const auto b = five_term_defect_bound(f, p, x, y, z);
        CHECK(b.direct_value <= b.chain_value + 1e-12 * (1.0 + b.chain_value));
        CHECK(b.direct_value == Approx(jensen_defect(f, f, f, p, x, y)).margin(1e-12));
    }
}

TEST_CASE("five-term chain is bounded by 5 eps for calibrated noise", "[restricted]") {
    const JensenParams p{2, 3, 1};
    const double eps = 0.6;
    const auto sp = NormedSpace::euclidean(2);
    const auto f = make_perturbed_additive(random_matrix(2, 2, 4), PerturbationSpec::bounded(eps / p.sum(), 8));
    SplitMix64 rng(54);
    const double d = 2.0;
    for (int k = 0; k < 2000; ++k) {
        const Vector x = 0.5 * d * rng.uniform01() * random_direction(sp, rng);
        const Vector y = 0.5 * d * rng.uniform01() * random_direction(sp, rng);
        const auto b = five_term_defect_bound(f, p, x, y, construct_z(x, y, d, sp));
        for (double term : b.terms) CHECK(term <= eps * (1 + 1e-12) + 1e-12);
        CHECK(b.chain_value <= 5 * eps * (1 + 1e-12) + 1e-12);
    }
    const auto lin = make_perturbed_additive(random_matrix(2, 2, 4), PerturbationSpec::none());
    const auto zero = five_term_defect_bound(lin, p, vec({0.1, 0.2}), vec({0.3, 0}), construct_z(vec({0.1, 0.2}), vec({0.3, 0}), d, sp));
    CHECK(zero.chain_value <= 1e-12);
    CHECK(zero.direct_value <= 1e-12);
}

TEST_CASE("exterior_defect_sup", "[restricted]") {
    const JensenParams p{2, 1, 3};
    const double eps = 0.5;
    SamplerSpec s;
    s.count = 400;
    s.seed = 3;
    const auto lin = make_perturbed_additive(random_matrix(2, 2, 5), PerturbationSpec::none());
    CHECK(exterior_defect_sup(lin, lin, lin, p, 1.0, s) <= 1e-9);
    const auto f = make_perturbed_additive(random_matrix(2, 2, 5), PerturbationSpec::bounded(eps / p.sum(), 9));
    const double small = exterior_defect_sup(f, f, f, p, 1.0, s);
    CHECK(small <= eps * (1 + 1e-12) + 1e-9);
    CHECK(small > 0.0);
    // More samples from the same stream can only raise the sup.
    SamplerSpec more = s;
    more.count = 4000;
    CHECK(exterior_defect_sup(f, f, f, p, 1.0, more) >= small);
}

TEST_CASE("asymptotic profile examples", "[restricted]") {
    const auto e2 = NormedSpace::euclidean(2);
    const JensenParams p{1, 1, 1};
    ShellSpec shells;
    shells.edges = {1, 10, 100, 1000, 10000};
    shells.samples_per_shell = 400;
    shells.seed = 2;

    const auto lin = make_perturbed_additive(random_matrix(1, 2, 1), PerturbationSpec::none(), e2, NormedSpace::euclidean(1));
    const auto zero = asymptotic_profile(lin, p, shells);
    for (double v : zero.sup_defect) CHECK(v <= 1e-9);
    CHECK(zero.asymptotically_additive(1e-9));

    const double a = 0.1;
    const auto bounded = make_perturbed_additive(random_matrix(1, 2, 1), PerturbationSpec::bounded(a, 3), e2,
                                                 NormedSpace::euclidean(1));
    const auto flat = asymptotic_profile(bounded, p, shells);
    CHECK(flat.plateau());
    CHECK_FALSE(flat.asymptotically_additive(0.0));
    for (double v : flat.sup_defect) {
        CHECK(v <= 3 * a + 1e-9);
        CHECK(v >= 0.5 * 3 * a);
    }

    ShellSpec balanced = shells;
    balanced.min_split = 0.25;
    const auto decaying = make_perturbed_additive(random_matrix(1, 2, 1), PerturbationSpec::decaying(1.0, 4), e2,
                                                  NormedSpace::euclidean(1));
    const auto prof = asymptotic_profile(decaying, p, balanced);
    CHECK(prof.decreasing());
    CHECK(prof.tail_ratio() < 0.01);
    for (std::size_t k = 0; k < prof.sup_defect.size(); ++k) CHECK(prof.sup_defect[k] <= 1.0 + 2.0 / (1.0 + 0.25 * balanced.edges[k]) + 1e-12);

    std::ostringstream csv;
    write_profile_csv(csv, prof);
    const std::string text = csv.str();
    CHECK(text.substr(0, text.find('\n')) == "shell_edge_low,shell_edge_high,sup_defect,samples");
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("interior pair sampler stays inside the ball of radius d", "[sampling]") {
    for (const auto& sp : norms(3)) {
        const auto pairs = sample_interior_pairs(sp, 2.0, 5000, 7);
        CHECK(pairs.size() == 5000);
        CHECK(is_zero(pairs.front().first));
        CHECK(is_zero(pairs.front().second));
        for (const auto& [x, y] : pairs) CHECK(norm(sp, x) + norm(sp, y) < 2.0);
    }
}
