#include "jensenlab/control.hpp"
#include "jensenlab/function_model.hpp"
#include "jensenlab/limits.hpp"
#include "jensenlab/random.hpp"
#include "jensenlab/series.hpp"

#include <catch_amalgamated.hpp>

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

// Partial sums written directly from the series definitions, term by term.
double dyadic_partial(const ControlFunctionSpec& c, const NormedSpace& sp, const Vector& x, const Vector& y,
                      const JensenParams& p, int terms) {
    const double r = p.r, s = p.s, t = p.t;
    const Vector zero = Vector::Zero(sp.dim);
    double sum = 0.0;
    for (int n = 0; n < terms; ++n) {
        const double k = std::ldexp(1.0, n);
        const Vector a = k * (r / s) * x, b = k * (r / t) * y;
        sum += (control_phi_eval(c, sp, a, b) + control_phi_eval(c, sp, a, zero) + control_phi_eval(c, sp, zero, b)) / k;
    }
    return sum / (2.0 * r);
}

double triadic_partial(const ControlFunctionSpec& c, const NormedSpace& sp, const Vector& x, const Vector& y, int terms) {
    double sum = 0.0;
    for (int n = 0; n < terms; ++n) {
        const double k = std::pow(3.0, n);
        auto phi = [&](double a, double b) { return control_phi_eval(c, sp, Vector(a * k * x), Vector(b * k * y)); };
        sum += (phi(1.5, -0.5) + 0.5 * phi(1.5, 1.5) + 0.5 * phi(1.5, -1.5) + 0.5 * phi(0.5, 0.5) + 0.5 * phi(0.5, -0.5)) / k;
    }
    return 2.0 / 3.0 * sum;
}

FunctionModel perturbed(const Matrix& L, const PerturbationSpec& p) { return make_perturbed_additive(L, p); }

}  // namespace

TEST_CASE("phi_tilde_dyadic examples", "[series]") {
    const auto e2 = NormedSpace::euclidean(2);
    const Vector x = vec({0.3, -1.2});
    const auto v = phi_tilde_dyadic(ControlFunctionSpec::constant(1.0), e2, x, x, JensenParams{2, 1, 1});
    CHECK(v.value == Approx(1.5).epsilon(1e-15));
    CHECK(v.exact);
    CHECK(v.tail_bound == 0.0);
    CHECK(std::abs(v.value - dyadic_partial(ControlFunctionSpec::constant(1.0), e2, x, x, {2, 1, 1}, 60)) <= 1e-10);
    CHECK(phi_tilde_dyadic(ControlFunctionSpec::constant(0.0), e2, x, x, JensenParams{3, 1, 2}).value == 0.0);

    const auto e1 = NormedSpace::euclidean(1);
    const auto mixed = ControlFunctionSpec::mixed(0.0, 1.0, 0.5);
    const auto m = phi_tilde_dyadic(mixed, e1, vec({1}), vec({1}), JensenParams{1, 1, 1});
    CHECK(m.value == Approx(2.0 / (1.0 - std::pow(2.0, -0.5))).epsilon(1e-14));
    CHECK(m.value == Approx(dyadic_partial(mixed, e1, vec({1}), vec({1}), {1, 1, 1}, 400)).epsilon(1e-12));
}

TEST_CASE("phi_tilde_dyadic of a constant control is 3eps/r for all params", "[series][property]") {
    const auto sp = NormedSpace::sup(2);
    for (int r = 1; r <= 5; ++r)
        for (int s = 1; s <= 5; ++s)
            for (int t = 1; t <= 5; ++t) {
                const auto v = phi_tilde_dyadic(ControlFunctionSpec::constant(0.7), sp, vec({1, 2}), vec({-3, 0.5}), {r, s, t});
                CHECK(v.value == Approx(3.0 * 0.7 / r).epsilon(1e-15));
            }
}

TEST_CASE("closed forms agree with 60-term partial sums", "[series][property]") {
    SplitMix64 rng(41);
    for (int k = 0; k < 200; ++k) {
        const auto sp = k % 2 ? NormedSpace::euclidean(2) : NormedSpace::p_norm(2, 1.5);
        const JensenParams p{rng.uniform_int(1, 5), rng.uniform_int(1, 5), rng.uniform_int(1, 5)};
        const auto c = k % 3 == 0 ? ControlFunctionSpec::constant(rng.uniform01())
                                  : ControlFunctionSpec::mixed(rng.uniform01(), rng.uniform01(), 0.25 * rng.uniform_int(0, 1));
        const Vector x = rng.normal_vector(2), y = rng.normal_vector(2);
        const double closed = phi_tilde_dyadic(c, sp, x, y, p).value;
        const double terms = c.p == 0.0 ? 60 : 400;  // p = 0.25 contracts at 2^{-3/4} per term
        CHECK(std::abs(closed - dyadic_partial(c, sp, x, y, p, static_cast<int>(terms))) <= 1e-10 * (1.0 + closed));
        const double tri = phi_tilde_triadic(c, sp, x, y).value;
        CHECK(std::abs(tri - triadic_partial(c, sp, x, y, c.p == 0.0 ? 60 : 200)) <= 1e-10 * (1.0 + tri));
    }
}

TEST_CASE("phi_tilde_triadic examples", "[series]") {
    const auto e2 = NormedSpace::euclidean(2);
    const Vector x = vec({1, 1});
    const auto v = phi_tilde_triadic(ControlFunctionSpec::constant(1.0), e2, x, x);
    CHECK(v.value == Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(v.value - triadic_partial(ControlFunctionSpec::constant(1.0), e2, x, x, 60)) <= 1e-10);
    CHECK(phi_tilde_triadic(ControlFunctionSpec::constant(0.0), e2, x, x).value == 0.0);
    // (1/r) times the triadic series is the first entry of the punctured min-bound.
    for (int r = 1; r <= 5; ++r) CHECK(v.value / r == Approx(3.0 / r));
    // Σₖ 3⁻ᵏ ψ = (3/2)·2ε for a constant control.
    double psi_sum = 0.0;
    for (int k = 0; k < 60; ++k) psi_sum += psi_eval(ControlFunctionSpec::constant(1.0), e2, x) / std::pow(3.0, k);
    CHECK(psi_sum == Approx(v.value).epsilon(1e-12));
}

TEST_CASE("table controls are summed with a tail bound", "[series]") {
    const auto e1 = NormedSpace::euclidean(1);
    // φ(x, y) = ρ(‖x‖) + ρ(‖y‖) with ρ(u) = √u, tabulated and extended with exponent 0.5.
    std::vector<double> knots, vals;
    for (int i = 0; i <= 400; ++i) {
        knots.push_back(i * 0.25);
        vals.push_back(std::sqrt(i * 0.25));
    }
    const auto table = ControlFunctionSpec::table(knots, vals, 0.5);
    const auto mixed = ControlFunctionSpec::mixed(0.0, 1.0, 0.5);
    const auto t = phi_tilde_dyadic(table, e1, vec({1}), vec({1}), JensenParams{1, 1, 1});
    const auto m = phi_tilde_dyadic(mixed, e1, vec({1}), vec({1}), JensenParams{1, 1, 1});
    CHECK_FALSE(t.exact);
    CHECK(t.tail_bound >= 0.0);
    CHECK(t.value == Approx(m.value).epsilon(1e-3));
    CHECK_THROWS(phi_tilde_dyadic(ControlFunctionSpec::table(knots, vals, 1.0), e1, vec({1}), vec({1}), JensenParams{1, 1, 1}));
}

TEST_CASE("cor22_bound examples", "[series]") {
    CHECK(cor22_bound({2, 1, 1}, 1.0, 0.0, 0.0, 5.0) == Approx(1.5));
    CHECK(cor22_bound({1, 1, 1}, 0.0, 1.0, 0.5, 1.0) == Approx(4.0 / (1.0 - std::pow(2.0, -0.5))));
    CHECK(cor22_bound({1, 1, 1}, 0.0, 1.0, 0.5, 1.0) == Approx(13.657).margin(1e-3));
    CHECK(cor22_bound({3, 2, 1}, 0.0, 0.0, 0.5, 10.0) == 0.0);
    CHECK_THROWS(cor22_bound({1, 1, 1}, 1.0, 1.0, 1.0, 1.0));
}

TEST_CASE("phi_tilde_dyadic is dominated by cor22_bound", "[series][property]") {
    SplitMix64 rng(43);
    for (int k = 0; k < 10'000; ++k) {
        const auto sp = NormedSpace::euclidean(2);
        const JensenParams p{rng.uniform_int(1, 5), rng.uniform_int(1, 5), rng.uniform_int(1, 5)};
        const double eps = rng.uniform01(), delta = rng.uniform01(), pw = 0.25 * rng.uniform_int(0, 3);
        const Vector x = random_point(sp, rng, 1e-3, 1e3);
        const double series = phi_tilde_dyadic(ControlFunctionSpec::mixed(eps, delta, pw), sp, x, x, p).value;
        CHECK(series <= cor22_bound(p, eps, delta, pw, norm(sp, x)) * (1.0 + 1e-12));
    }
}

TEST_CASE("psi_eval examples", "[series]") {
    const auto e1 = NormedSpace::euclidean(1);
    CHECK(psi_eval(ControlFunctionSpec::constant(0.8), e1, vec({2})) == Approx(1.6));
    CHECK(psi_eval(ControlFunctionSpec::constant(0.0), e1, vec({2})) == 0.0);
    const double a = std::sqrt(1.5), b = std::sqrt(0.5);
    const double expected =
        (2.0 / 3.0) * (a + b) + (1.0 / 3.0) * (2 * a) + (1.0 / 3.0) * (a + a) + (1.0 / 3.0) * (2 * b) + (1.0 / 3.0) * (b + b);
    CHECK(psi_eval(ControlFunctionSpec::mixed(0.0, 1.0, 0.5), e1, vec({1})) == Approx(expected).epsilon(1e-14));
}

TEST_CASE("dyadic_limit examples", "[limits]") {
    const Matrix L = random_matrix(2, 2, 1);
    const auto lin = perturbed(L, PerturbationSpec::none());
    const auto e2 = NormedSpace::euclidean(2);
    const Vector x = vec({0.7, -2.0});
    const auto exact = dyadic_limit(lin, e2, x);
    CHECK(exact.converged);
    CHECK(exact.iterations == 1);
    CHECK(exact.value.isApprox(L * x, 1e-15));

    const auto noisy = perturbed(L, PerturbationSpec::bounded(0.1, 3));
    const auto est = dyadic_limit(noisy, e2, x, {40, 1e-9});
    CHECK(est.converged);
    CHECK(est.last_gap <= 1e-9);
    CHECK((est.value - L * x).norm() <= 0.1 * std::ldexp(1.0, -est.iterations) + 1e-12);

    FunctionModel q(e2, NormedSpace::euclidean(1), Matrix::Zero(1, 2));
    q.with_quadratic(vec({1.0}));
    const auto div = dyadic_limit(q, NormedSpace::euclidean(1), x, {40, 1e-9});
    CHECK_FALSE(div.converged);
    CHECK(div.iterations == 40);
}

TEST_CASE("dyadic_limit reports overflow", "[limits]") {
    const auto lin = perturbed(Matrix::Identity(1, 1), PerturbationSpec::none());
    FunctionModel q(NormedSpace::euclidean(1), NormedSpace::euclidean(1), Matrix::Zero(1, 1));
    q.with_quadratic(vec({1.0}));
    CHECK_THROWS_AS(dyadic_limit(q, NormedSpace::euclidean(1), vec({1e300}), {40, 1e-9}), std::overflow_error);
    CHECK_THROWS(dyadic_limit(lin, NormedSpace::euclidean(1), vec({1.0}), {0, 1e-9}));
}

TEST_CASE("triadic and quadratic limits", "[limits]") {
    const Matrix L = random_matrix(2, 3, 2);
    const auto e2 = NormedSpace::euclidean(2);
    const Vector x = vec({1, 2, -1});
    const auto noisy = make_perturbed_additive(L, PerturbationSpec::bounded(0.2, 5), NormedSpace::euclidean(3), e2);
    const auto tri = triadic_limit(noisy, e2, x);
    const auto dya = dyadic_limit(noisy, e2, x);
    CHECK(tri.converged);
    CHECK(tri.last_gap <= 0.2 * 2.0 * std::pow(3.0, -tri.iterations + 1));
    CHECK((tri.value - dya.value).norm() <= 2e-9);

    FunctionModel q(NormedSpace::euclidean(3), e2, Matrix::Zero(2, 3));
    q.with_quadratic(vec({0.5, -1.0}));
    const auto qe = quadratic_limit(q, e2, x);
    CHECK(qe.converged);
    CHECK(qe.value.isApprox(vec({0.5 * 6, -6}), 1e-14));

    const auto lin = make_perturbed_additive(L, PerturbationSpec::none(), NormedSpace::euclidean(3), e2);
    CHECK(quadratic_limit(lin, e2, x).value.norm() <= 1e-9);

    q.with_perturbation(PerturbationSpec::bounded(0.3, 6));
    auto even = odd_even_split(q).second;
    const auto qn = quadratic_limit(even, e2, x);
    CHECK(qn.converged);
    CHECK((qn.value - q.exact_part(x)).norm() <= 0.3 * std::pow(4.0, -qn.iterations) + 1e-9);
}

TEST_CASE("cauchy_gap bounds", "[limits]") {
    const auto e2 = NormedSpace::euclidean(2);
    const Matrix L = random_matrix(2, 2, 3);
    CHECK(cauchy_gap(perturbed(L, PerturbationSpec::none()), e2, vec({1, 1}), 2, 0, 5) <= 1e-14);
    const double a = 0.25;
    const auto f = perturbed(L, PerturbationSpec::bounded(a, 9));
    SplitMix64 rng(5);
    for (int k = 0; k < 500; ++k) {
        const Vector x = rng.normal_vector(2) * 10.0;
        const int m = rng.uniform_int(0, 5), n = m + rng.uniform_int(1, 8);
        CHECK(cauchy_gap(f, e2, x, 2, m, n) <= a * (std::ldexp(1.0, -m) + std::ldexp(1.0, -n)) + 1e-12 * (1 + x.norm()));
    }
    CHECK_THROWS(cauchy_gap(f, e2, vec({1, 1}), 5, 0, 1));
    CHECK_THROWS(cauchy_gap(f, e2, vec({1, 1}), 2, 3, 3));
}

TEST_CASE("single triadic step is bounded by psi on the punctured space", "[limits][property]") {
    // F(x) = L x + u(x) with ‖u‖ ≤ a satisfies the punctured hypothesis with r=s=t=1 and ε = 3a.
    const auto e2 = NormedSpace::euclidean(2);
    const double a = 0.1;
    const auto f = perturbed(random_matrix(2, 2, 4), PerturbationSpec::bounded(a, 10));
    const auto ctl = ControlFunctionSpec::constant(3.0 * a);
    SplitMix64 rng(6);
    for (int k = 0; k < 500; ++k) {
        const Vector x = rng.normal_vector(2) * 3.0;
        const int n = rng.uniform_int(1, 10);
        const double gap = cauchy_gap(f, e2, x, 3, n - 1, n);
        CHECK(gap <= psi_eval(ctl, e2, Vector(std::pow(3.0, n - 1) * x)) / std::pow(3.0, n - 1) + 1e-12 * (1 + x.norm()));
    }
}

TEST_CASE("recovered limit is additive and rationally homogeneous", "[limits][property]") {
    const auto e2 = NormedSpace::euclidean(2);
    const double tol = 1e-9;
    const auto f = perturbed(random_matrix(2, 2, 7), PerturbationSpec::bounded(0.3, 11));
    auto T = [&](const Vector& x) { return dyadic_limit(f, e2, x, {40, tol}).value; };
    SplitMix64 rng(8);
    for (int k = 0; k < 1000; ++k) {
        const Vector x = rng.normal_vector(2) * 5.0, y = rng.normal_vector(2) * 5.0;
        CHECK((T(Vector(x + y)) - T(x) - T(y)).norm() <= 3 * tol);
    }
    for (int k = 0; k < 300; ++k) {
        const Vector x = rng.normal_vector(2) * 5.0;
        const double pq = static_cast<double>(rng.uniform_int(-6, 6)) / rng.uniform_int(1, 6);
        CHECK((T(Vector(pq * x)) - pq * T(x)).norm() <= 2 * tol * (1.0 + std::abs(pq)));
    }
}

TEST_CASE("limit of a perturbed additive model approaches the linear part", "[limits][property]") {
    const auto e2 = NormedSpace::euclidean(2);
    const Matrix L = random_matrix(2, 2, 12);
    const double amp = 0.5;
    const auto f = perturbed(L, PerturbationSpec::bounded(amp, 13));
    SplitMix64 rng(9);
    for (int k = 0; k < 1000; ++k) {
        const Vector x = random_point(e2, rng, 1e-3, 1e3);
        const LimitSettings s{40, 1e-9};
        const auto est = dyadic_limit(f, e2, x, s);
        CHECK((est.value - L * x).norm() <= amp * std::ldexp(2.0, -est.iterations) + s.tol + 1e-15 * (L * x).norm());
    }
}
