#include "sbvp/error.hpp"
#include "sbvp/series.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sbvp;
using namespace sbvp::testing;

namespace {

double interior_residual(const SampledFn& u, const SampledFn& a, const SampledFn& f) {
    const double h = u.grid().h();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        worst = std::max(worst, std::fabs(d2 + a[i] * u[i] - f[i]));
    }
    return worst;
}

} // namespace

TEST_SUITE("series") {

TEST_CASE("contraction_ratio") {
    const ContractionCertificate c = contraction_ratio(1.0, 1.0);
    CHECK(c.q == 0.5);
    CHECK(c.margin == 0.5);
    try {
        contraction_ratio(1.0, 1.5);
        FAIL("expected ContractionViolation");
    } catch (const ContractionViolation& e) {
        CHECK(e.q() == doctest::Approx(1.125));
        CHECK(e.max_x1() == doctest::Approx(std::sqrt(2.0)));
    }
    CHECK(contraction_ratio(0.0, 10.0).q == 0.0);
    CHECK_THROWS_AS(contraction_ratio(2.0, 1.0), ContractionViolation); // q == 1 exactly
    CHECK_THROWS_AS(contraction_ratio(-1.0, 1.0), InvalidDomain);
}

TEST_CASE("apply_B closed forms") {
    const GridPtr g = make_grid(1.0, 64);
    const SampledFn one = from_expr("1", g);
    const SampledFn id = from_expr("x", g);

    // int_0^x (1 - y) dy = x - x^2/2
    const SampledFn b1 = apply_B(one, one);
    CHECK(max_abs_diff(b1, [](double x) { return x - x * x / 2; }) <= 1e-15);
    CHECK(b1[32] == doctest::Approx(0.375).epsilon(1e-15));

    // int_0^x (1 - y^2)/2 dy = x/2 - x^3/6
    const SampledFn bt = apply_B(id, one);
    CHECK(max_abs_diff(bt, [](double x) { return x / 2 - x * x * x / 6; }) <= 1e-15);
    CHECK(bt.back() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK(sup_norm(apply_B(id, SampledFn(g))) == 0.0);

    const SampledFn r1 = apply_B_reference(one, one);
    CHECK(r1[32] == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(sup_norm(apply_B_reference(id, SampledFn(g))) == 0.0);
}

TEST_CASE("apply_B against an independent double integral") {
    // Smooth data: both quadratures are second order, the oracle is Gauss-Legendre
    // on the exact functions.
    const GridPtr g = make_grid(1.2, 1024);
    const SampledFn a = from_expr("cos(x)", g);
    const SampledFn u = from_expr("exp(-x)", g);
    const SampledFn b = apply_B(u, a);
    for (double x : {0.3, 0.6, 1.2}) {
        const double exact = gauss_legendre(
            [](double y) { return gauss_legendre([](double t) { return std::cos(t) * std::exp(-t); }, y, 1.2, 8); }, 0.0,
            x, 8);
        CHECK(std::fabs(b.at(x) - exact) <= 1e-6);
    }
}

TEST_CASE("swapped-order form equals the nested transcription") {
    std::mt19937_64 rng(1234);
    for (int n : {16, 64, 256}) {
        for (double x1 : {0.5, 1.0, 1.4}) {
            const GridPtr g = make_grid(x1, n);
            for (int trial = 0; trial < 5; ++trial) {
                const SampledFn a = random_fn(rng, g);
                const SampledFn u = random_fn(rng, g, -3.0, 3.0);
                const SampledFn fast = apply_B(u, a);
                const SampledFn ref = apply_B_reference(u, a);
                CHECK(max_abs_diff(fast, ref) <= 1e-13 * std::max(1.0, sup_norm(ref)));
            }
        }
    }
    CHECK_THROWS_AS(apply_B(SampledFn(make_grid(1.0, 4)), SampledFn(make_grid(1.0, 8))), GridMismatch);
}

TEST_CASE("compute_g") {
    const GridPtr g1 = make_grid(1.0, 16);
    CHECK(max_abs_diff(compute_g(from_expr("1", g1)), [](double x) { return -(x - x * x / 2); }) <= 1e-15);
    CHECK(sup_norm(compute_g(SampledFn(g1))) == 0.0);
    const GridPtr g2 = make_grid(2.0, 16);
    const SampledFn g = compute_g(from_expr("2", g2));
    CHECK(g[8] == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(max_abs_diff(g, [](double x) { return -(4 * x - x * x); }) <= 1e-14);
}

TEST_CASE("sum_series examples") {
    const GridPtr g = make_grid(1.0, 2048);
    const SampledFn id = from_expr("x", g);
    const SampledFn one = from_expr("1", g);

    const SampledFn zero(g);
    const SeriesSum trivial = sum_series(id, zero, certify(zero));
    CHECK(trivial.terms == 1);
    CHECK(trivial.tail == 0.0);
    CHECK(max_abs_diff(trivial.value, id) == 0.0);

    const ContractionCertificate cert = certify(one);
    const SeriesSum i2 = sum_series(one, one, cert, {1e-10});
    CHECK(i2.tail <= 1e-10);
    CHECK(std::fabs(i2.value.back() - 1.0 / std::cos(1.0)) <= 1e-6);
    CHECK(max_abs_diff(i2.value, [](double x) { return std::cos(x) + std::tan(1.0) * std::sin(x); }) <= 1e-6);

    const SeriesSum i1 = sum_series(id, one, cert, {1e-10});
    CHECK(std::fabs(i1.value.back() - std::tan(1.0)) <= 1e-6);
    CHECK(max_abs_diff(i1.value, [](double x) { return std::sin(x) / std::cos(1.0); }) <= 1e-6);

    // Smallest m with 2 |seed| q^(m+1) / (1 - q) <= tol, q = 1/2, |seed| = 1.
    int m = 0;
    while (2.0 * std::pow(0.5, m + 1) / 0.5 > 1e-10) ++m;
    CHECK(i2.terms == m + 1);
}

TEST_CASE("sum_series guards") {
    const GridPtr g = make_grid(1.0, 32);
    const SampledFn one = from_expr("1", g);
    const ContractionCertificate cert = certify(one);
    CHECK_THROWS_AS(sum_series(one, one, cert, {1e-10, 3}), MaxTermsExceeded);
    CHECK_THROWS_AS(sum_series(one, one, cert, {0.0}), InvalidDomain);
    CHECK_THROWS_AS(sum_series(one, from_expr("1.5", g), cert), InvalidDomain);
    CHECK_THROWS_AS(sum_series(one, one, contraction_ratio(1.0, 0.5)), InvalidDomain);

    int calls = 0;
    sum_series(one, one, cert, {1e-4}, [&](int k, const SampledFn&) { CHECK(k == calls++); });
    CHECK(calls > 1);
}

TEST_CASE("derivative_of") {
    std::mt19937_64 rng(99);
    const GridPtr g = make_grid(1.0, 2048);
    const SampledFn one = from_expr("1", g);
    const SampledFn id = from_expr("x", g);

    const SampledFn a_rand = random_fn(rng, g);
    const SeriesSum i1r = sum_series(id, a_rand, certify(a_rand));
    CHECK(derivative_of(i1r.value, SeedKind::Identity, a_rand).back() == 1.0);

    const SeriesSum i1 = sum_series(id, one, certify(one));
    const SampledFn d1 = derivative_of(i1.value, SeedKind::Identity, one);
    CHECK(std::fabs(d1.front() - 1.0 / std::cos(1.0)) <= 1e-6);
    CHECK(max_abs_diff(d1, [](double x) { return std::cos(x) / std::cos(1.0); }) <= 1e-6);

    const SampledFn zero(g);
    const SampledFn fsum = sum_series(compute_g(one), zero, certify(zero)).value;
    const SampledFn dF = derivative_of(fsum, SeedKind::G, zero, &one);
    CHECK(dF.front() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dF.back() == 0.0);
    CHECK(max_abs_diff(dF, [](double x) { return -(1.0 - x); }) <= 1e-14);

    CHECK_THROWS_AS(derivative_of(fsum, SeedKind::G, zero), MissingF);
    CHECK_THROWS_AS(derivative_of(fsum, SeedKind::One, SampledFn(make_grid(1.0, 8))), GridMismatch);
}

TEST_CASE("fundamental_system examples") {
    const GridPtr g = make_grid(1.0, 2048);
    const SampledFn zero(g);
    const SampledFn one = from_expr("1", g);

    const SeriesSolution trivial = fundamental_system(zero, zero);
    CHECK(max_abs_diff(trivial.I1, [](double x) { return x; }) == 0.0);
    CHECK(max_abs_diff(trivial.I2, [](double) { return 1.0; }) == 0.0);
    CHECK(sup_norm(trivial.F) == 0.0);
    CHECK(trivial.terms_I1 == 1);

    const SeriesSolution cosine = fundamental_system(one, zero);
    CHECK(std::fabs(cosine.I2.back() - 1.0 / std::cos(1.0)) <= 1e-6);
    CHECK(std::fabs(cosine.I1.back() - std::tan(1.0)) <= 1e-6);
    CHECK(sup_norm(cosine.F) == 0.0);

    const SeriesSolution forced = fundamental_system(zero, one);
    CHECK(max_abs_diff(forced.F, [](double x) { return -(x - x * x / 2); }) <= 1e-15);
}

TEST_CASE("boundary identities hold exactly") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const GridPtr g = make_grid(0.9, 257);
        const SampledFn a = random_fn(rng, g, -1.5, 1.5);
        const SampledFn f = random_fn(rng, g, -2.0, 2.0);
        const SeriesSolution s = fundamental_system(a, f);
        CHECK(s.I1.front() == 0.0);
        CHECK(s.I2.front() == 1.0);
        CHECK(s.F.front() == 0.0);
        CHECK(s.dI1.back() == 1.0);
        CHECK(s.dI2.back() == 0.0);
        CHECK(s.dF.back() == 0.0);
    }
}

TEST_CASE("term bounds hold for every computed term") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        const double x1 = 0.4 + 0.6 * unit(rng);
        const GridPtr g = make_grid(x1, 256);
        const double amp = 1.9 * unit(rng) / (x1 * x1);
        const SampledFn a = combine(amp, random_fn(rng, g), 0.0, SampledFn(g));
        const SampledFn f = random_fn(rng, g, -3.0, 3.0);
        const SeriesSolution s = fundamental_system(a, f);
        const std::pair<const BoundTrace*, int> traces[] = {
            {&s.bounds.iterate_I1, s.terms_I1}, {&s.bounds.a_terms, s.terms_I1}, {&s.bounds.iterate_I2, s.terms_I2},
            {&s.bounds.b_terms, s.terms_I2},    {&s.bounds.iterate_F, s.terms_F},
        };
        for (const auto& [trace, terms] : traces) {
            CHECK(trace->worst_excess <= 1e-12);
            CHECK(trace->checked == terms - 1);
        }
        const double ax2 = s.certificate.a_sup * x1 * x1;
        // The I1 estimate as usually quoted, valid here since x1 <= 1.
        CHECK(sup_norm(s.I1) <= 2.0 / (2.0 - ax2) + 1e-12);
        CHECK(sup_norm(s.I2) <= (2.0 + ax2) / (2.0 - ax2) + 1e-12);
        CHECK(sup_norm(s.F) <= sup_norm(s.g) * (2.0 + ax2) / (2.0 - ax2) + 1e-12);
    }
}

TEST_CASE("reported tail bounds the truncation error") {
    const GridPtr g = make_grid(1.0, 512);
    const SampledFn a = from_expr("1.5*cos(2*x)", g);
    const SampledFn f = from_expr("exp(x)", g);
    const ContractionCertificate cert = certify(a);
    for (double tol : {1e-4, 1e-6, 1e-8}) {
        const SeriesSolution coarse = fundamental_system(a, f, cert, {tol});
        const SeriesSolution fine = fundamental_system(a, f, cert, {tol / 10});
        CHECK(max_abs_diff(coarse.I1, fine.I1) <= coarse.tail_I1);
        CHECK(max_abs_diff(coarse.I2, fine.I2) <= coarse.tail_I2);
        CHECK(max_abs_diff(coarse.F, fine.F) <= coarse.tail_F);
        CHECK(coarse.tail_I1 <= tol);
        CHECK(coarse.tail_F <= tol);
    }
}

TEST_CASE("ODE residuals are second order") {
    auto residuals = [](int n) {
        const GridPtr g = make_grid(1.0, n);
        const SampledFn a = from_expr("sin(x) + 0.5", g);
        const SampledFn f = from_expr("cos(2*x)", g);
        const SeriesSolution s = fundamental_system(a, f);
        const SampledFn zero(g);
        return std::array<double, 3>{interior_residual(s.I1, a, zero), interior_residual(s.I2, a, zero),
                                     interior_residual(s.F, a, f)};
    };
    const auto coarse = residuals(256);
    const auto fine = residuals(512);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(coarse[k] / fine[k] == doctest::Approx(4.0).epsilon(0.1));
    }
}

} // TEST_SUITE
