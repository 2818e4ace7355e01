#include "sbvp/bvp.hpp"
#include "sbvp/error.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sbvp;
using namespace sbvp::testing;

TEST_SUITE("bvp") {

TEST_CASE("general_solution") {
    const GridPtr g = make_grid(1.0, 1024);
    const SampledFn zero(g);
    const SampledFn one = from_expr("1", g);

    const SeriesSolution forced = fundamental_system(from_expr("0.3*x", g), one);
    CHECK(max_abs_diff(general_solution(forced, 0.0, 0.0).u, forced.F) == 0.0);

    const SeriesSolution trivial = fundamental_system(zero, zero);
    const GeneralSolution lin = general_solution(trivial, 3.0, 2.0);
    CHECK(max_abs_diff(lin.u, [](double x) { return 3 * x + 2; }) == 0.0);
    CHECK(max_abs_diff(lin.du, [](double) { return 3.0; }) == 0.0);

    const SeriesSolution cosine = fundamental_system(one, zero);
    CHECK(std::fabs(general_solution(cosine, 1.0, 0.0).u.back() - std::tan(1.0)) <= 1e-6);
}

TEST_CASE("solve_problem_d examples") {
    const GridPtr g = make_grid(1.0, 1024);
    const SampledFn zero(g);
    const SampledFn one = from_expr("1", g);

    const SolveReport lin = solve_problem_d(fundamental_system(zero, zero), {2.0, 3.0});
    REQUIRE(lin.u);
    CHECK(max_abs_diff(*lin.u, [](double x) { return 3 * x + 2; }) == 0.0);
    CHECK(lin.u->front() == 2.0);
    CHECK(lin.du->back() == 3.0);
    CHECK(lin.c1 == 3.0);
    CHECK(lin.c2 == 2.0);
    CHECK(lin.residual_max == 0.0);
    CHECK(lin.fixedpoint_err == 0.0);
    CHECK(!lin.bound_checks.empty());

    const SolveReport cosine = solve_problem_d(fundamental_system(one, zero), {0.0, 1.0});
    CHECK(std::fabs(cosine.u->back() - std::tan(1.0)) <= 1e-6);

    // u'' = 1, u(0) = 0, u'(1) = 0.
    const SolveReport forced = solve_problem_d(fundamental_system(zero, one), {0.0, 0.0});
    CHECK(max_abs_diff(*forced.u, [](double x) { return x * x / 2 - x; }) <= 1e-15);

    CHECK_THROWS_AS(solve_problem_d(fundamental_system(zero, zero), {std::nan(""), 0.0}), InvalidDomain);
}

TEST_CASE("singular I2 is reported, not solved") {
    const GridPtr g = make_grid(1.0, 64);
    SeriesSolution sol = fundamental_system(from_expr("0.5", g), from_expr("1", g));
    std::vector<double> v(sol.I2.values().begin(), sol.I2.values().end());
    v.back() = 1e-12;
    sol.I2 = SampledFn(g, v);

    const SolveReport report = diagnose_problem_d(sol, {1.0, 1.0});
    CHECK(report.singular);
    CHECK(!report.u.has_value());
    CHECK(report.i2_at_x1 == 1e-12);
    CHECK(!report.bound_checks.empty());
    CHECK(report.singular_tol == doctest::Approx(1e-8 * sup_norm(sol.I2)));
    CHECK_THROWS_AS(solve_problem_d(sol, {1.0, 1.0}), SingularI2);
}

TEST_CASE("wronskian_check") {
    const GridPtr g = make_grid(1.0, 1024);
    const SampledFn zero(g);
    const WronskianCheck flat = wronskian_check(fundamental_system(zero, zero));
    CHECK(flat.dev == 0.0);
    for (double w : flat.w.values()) CHECK(w == -1.0);

    const SeriesSolution cosine = fundamental_system(from_expr("1", g), zero);
    const WronskianCheck wc = wronskian_check(cosine);
    CHECK(wc.dev <= 1e-6);
    CHECK(std::fabs(wc.w.front() + 1.0 / std::cos(1.0)) <= 1e-6);
    CHECK(std::fabs(wc.w.front() + cosine.I2.back()) <= 1e-6);
}

TEST_CASE("wronskian deviation is second order") {
    auto dev = [](int n) {
        const GridPtr g = make_grid(1.0, n);
        return wronskian_check(fundamental_system(from_expr("1/(1+x^2)", g), SampledFn(g))).dev;
    };
    CHECK(dev(256) / dev(512) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("residual_report") {
    const GridPtr g = make_grid(1.0, 64);
    const SampledFn zero(g);
    const SampledFn lin = from_expr("3*x + 2", g);
    const Residuals clean = residual_report(lin, zero, zero, 3.0, 2.0, zero);
    CHECK(clean.residual_max <= 1e-9);
    CHECK(clean.fixedpoint_err <= 1e-15);

    std::vector<double> v(lin.values().begin(), lin.values().end());
    v[20] += 1.0;
    const Residuals bumped = residual_report(SampledFn(g, v), zero, zero, 3.0, 2.0, zero);
    const double h = g->h();
    CHECK(bumped.residual_max >= 0.5 / (h * h));

    auto i2_residual = [](int n) {
        const GridPtr grid = make_grid(1.0, n);
        const SampledFn z(grid);
        const SeriesSolution s = fundamental_system(from_expr("1", grid), z);
        return residual_report(s.I2, s.a, z, 0.0, 1.0, z).residual_max;
    };
    const double r1024 = i2_residual(1024);
    CHECK(r1024 <= 1e-5);
    CHECK(i2_residual(512) / r1024 == doctest::Approx(4.0).epsilon(0.1));
    // Rounding in the summed series starts to show through the 1/h^2 stencil here.
    CHECK(r1024 / i2_residual(2048) >= 3.0);
}

TEST_CASE("problem D is linear in the boundary data") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> data(-5.0, 5.0);
    const GridPtr g = make_grid(1.0, 512);
    const SeriesSolution sol = fundamental_system(from_expr("cos(x)", g), from_expr("x^2", g));
    for (int trial = 0; trial < 10; ++trial) {
        const ProblemD p1{data(rng), data(rng)};
        const ProblemD p2{data(rng), data(rng)};
        const SolveReport s1 = solve_problem_d(sol, p1);
        const SolveReport s2 = solve_problem_d(sol, p2);
        const SolveReport s12 = solve_problem_d(sol, {p1.alpha + p2.alpha, p1.beta + p2.beta});
        const SampledFn sum = combine(1.0, combine(1.0, *s1.u, 1.0, *s2.u), -1.0, sol.F);
        CHECK(max_abs_diff(*s12.u, sum) <= 1e-12);
        CHECK(s1.u->front() == p1.alpha);
        CHECK(s1.du->back() == p1.beta);
        CHECK(s1.boundary_err_left == 0.0);
        CHECK(s1.boundary_err_right == 0.0);
    }
}

TEST_CASE("small contraction ratio keeps I2(x1) away from zero") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double x1 = 0.3 + 1.5 * unit(rng);
        const GridPtr g = make_grid(x1, 256);
        const double amp = (2.0 / 3.0) * 0.999 * unit(rng) / (x1 * x1);
        const SampledFn a = combine(amp, random_fn(rng, g), 0.0, SampledFn(g));
        const SeriesSolution sol = fundamental_system(a, random_fn(rng, g));
        const double q = sol.certificate.q;
        REQUIRE(q < 1.0 / 3.0);
        CHECK(sol.I2.back() >= 1.0 - 2.0 * q / (1.0 - q) - 1e-9);
        CHECK_NOTHROW(solve_problem_d(sol, {0.5, -0.5}));
    }
}

TEST_CASE("bound_checks pass on random coefficients") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double x1 = 0.5 + 2.0 * unit(rng);
        const GridPtr g = make_grid(x1, 200);
        const SampledFn a = combine(1.95 / (x1 * x1), random_fn(rng, g), 0.0, SampledFn(g));
        const SeriesSolution sol = fundamental_system(a, random_fn(rng, g, -4, 4));
        const auto checks = bound_checks(sol);
        CHECK(checks.size() == 8);
        for (const BoundCheck& c : checks) {
            INFO(c.name);
            CHECK(c.pass);
        }
    }
}

} // TEST_SUITE
