#include "sbvp/bvp.hpp"

#include "sbvp/error.hpp"

#include <algorithm>
#include <cmath>

namespace sbvp {

GeneralSolution general_solution(const SeriesSolution& sol, double c1, double c2) {
    std::vector<double> u(sol.I1.size());
    std::vector<double> du(sol.I1.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = c1 * sol.I1[i] + c2 * sol.I2[i] + sol.F[i];
        du[i] = c1 * sol.dI1[i] + c2 * sol.dI2[i] + sol.dF[i];
    }
    return GeneralSolution{SampledFn(sol.I1.grid_ptr(), std::move(u)), SampledFn(sol.I1.grid_ptr(), std::move(du))};
}

namespace {

BoundCheck from_trace(std::string name, const BoundTrace& trace, double slack) {
    // No terms beyond the seed: nothing to violate.
    const double excess = trace.checked == 0 ? 0.0 : trace.worst_excess;
    return BoundCheck{std::move(name), excess, slack, excess <= slack};
}

BoundCheck upper(std::string name, double value, double limit, double slack) {
    return BoundCheck{std::move(name), value, limit, value <= limit + slack};
}

} // namespace

std::vector<BoundCheck> bound_checks(const SeriesSolution& sol, double slack) {
    const double a_sup = sol.certificate.a_sup;
    const double x1 = sol.certificate.x1;
    const double ax2 = a_sup * x1 * x1;
    const double growth = (2.0 + ax2) / (2.0 - ax2);

    std::vector<BoundCheck> checks;
    checks.push_back(from_trace("iterate_bound_I1", sol.bounds.iterate_I1, slack));
    checks.push_back(from_trace("iterate_bound_I2", sol.bounds.iterate_I2, slack));
    checks.push_back(from_trace("iterate_bound_F", sol.bounds.iterate_F, slack));
    checks.push_back(from_trace("a_term_bound", sol.bounds.a_terms, slack));
    checks.push_back(from_trace("b_term_bound", sol.bounds.b_terms, slack));
    // |I1(x)| <= x / (1 - q): the a_k estimate carries a factor x, so the sup is
    // bounded by x1 * 2 / (2 - |a|_0 x1^2).
    checks.push_back(upper("sup_I1_bound", sup_norm(sol.I1), x1 * 2.0 / (2.0 - ax2), slack));
    checks.push_back(upper("sup_I2_bound", sup_norm(sol.I2), growth, slack));
    checks.push_back(upper("sup_F_bound", sup_norm(sol.F), sup_norm(sol.g) * growth, slack));
    return checks;
}

Residuals residual_report(const SampledFn& u, const SampledFn& a, const SampledFn& f, double c1, double c2,
                          const SampledFn& g) {
    require_same_grid(u, a);
    require_same_grid(u, f);
    require_same_grid(u, g);
    const Grid& grid = u.grid();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());

    Residuals r;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
        r.residual_max = std::max(r.residual_max, std::fabs(d2 + a[i] * u[i] - f[i]));
    }
    const SampledFn bu = apply_B(u, a);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double rhs = bu[i] + g[i] + c1 * grid.node(i) + c2;
        r.fixedpoint_err = std::max(r.fixedpoint_err, std::fabs(u[i] - rhs));
    }
    return r;
}

WronskianCheck wronskian_check(const SeriesSolution& sol) {
    const double i2_end = sol.I2.back();
    std::vector<double> w(sol.I1.size());
    double dev = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = sol.I1[i] * sol.dI2[i] - sol.dI1[i] * sol.I2[i];
        dev = std::max(dev, std::fabs(w[i] + i2_end));
    }
    return WronskianCheck{SampledFn(sol.I1.grid_ptr(), std::move(w)), dev};
}

double singular_threshold(const SeriesSolution& sol) {
    return 1e-8 * std::max(1.0, sup_norm(sol.I2));
}

SolveReport diagnose_problem_d(const SeriesSolution& sol, const ProblemD& prob) {
    SolveReport report;
    report.c1 = prob.beta;
    report.c2 = prob.alpha;
    report.i2_at_x1 = sol.I2.back();
    report.singular_tol = singular_threshold(sol);
    report.singular = !(std::fabs(report.i2_at_x1) > report.singular_tol);
    report.wronskian_dev = wronskian_check(sol).dev;
    report.bound_checks = bound_checks(sol);

    if (!report.singular) {
        GeneralSolution gs = general_solution(sol, report.c1, report.c2);
        report.boundary_err_left = std::fabs(gs.u.front() - prob.alpha);
        report.boundary_err_right = std::fabs(gs.du.back() - prob.beta);
        const Residuals r = residual_report(gs.u, sol.a, sol.f, report.c1, report.c2, sol.g);
        report.residual_max = r.residual_max;
        report.fixedpoint_err = r.fixedpoint_err;
        report.u = std::move(gs.u);
        report.du = std::move(gs.du);
    }
    return report;
}

SolveReport solve_problem_d(const SeriesSolution& sol, const ProblemD& prob) {
    if (!std::isfinite(prob.alpha) || !std::isfinite(prob.beta)) {
        throw InvalidDomain("alpha and beta must be finite");
    }
    SolveReport report = diagnose_problem_d(sol, prob);
    if (report.singular) throw SingularI2(report.i2_at_x1, report.singular_tol);
    return report;
}

} // namespace sbvp
