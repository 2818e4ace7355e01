#pragma once

#include "sbvp/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbvp {

/// Problem D data: u(0) = alpha, u'(x1) = beta.
struct ProblemD {
    double alpha = 0.0;
    double beta = 0.0;
};

struct GeneralSolution {
    SampledFn u;
    SampledFn du;
};

/// u = c1 I1 + c2 I2 + F and its derivative, node-wise.
GeneralSolution general_solution(const SeriesSolution& sol, double c1, double c2);

struct BoundCheck {
    std::string name;
    double value = 0.0; ///< observed left-hand side (or worst excess for per-term checks)
    double limit = 0.0; ///< right-hand side the value is compared against
    bool pass = false;
};

inline constexpr double kBoundSlack = 1e-12;

/**
 * Evaluates the a-priori estimates on a converged solution:
 * per-term iterate bounds for the three series, the a_k / b_k term bounds,
 * and the sup bounds on I1, I2 and F. Each comparison gets `slack` added to
 * its right-hand side.
 */
std::vector<BoundCheck> bound_checks(const SeriesSolution& sol, double slack = kBoundSlack);

struct Residuals {
    double residual_max = 0.0;   ///< max interior |D2 u + a u - f|
    double fixedpoint_err = 0.0; ///< max |u - Bu - g - c1 x - c2|
};

Residuals residual_report(const SampledFn& u, const SampledFn& a, const SampledFn& f, double c1, double c2,
                          const SampledFn& g);

struct WronskianCheck {
    SampledFn w;
    double dev = 0.0; ///< max |W(x_i) + I2(x1)|
};

WronskianCheck wronskian_check(const SeriesSolution& sol);

/// 1e-8 * max(1, sup |I2|).
double singular_threshold(const SeriesSolution& sol);

struct SolveReport {
    std::optional<SampledFn> u; ///< empty when I2(x1) is singular
    std::optional<SampledFn> du;
    double c1 = 0.0;
    double c2 = 0.0;
    double boundary_err_left = 0.0;  ///< |u(0) - alpha|
    double boundary_err_right = 0.0; ///< |u'(x1) - beta|
    double residual_max = 0.0;
    double fixedpoint_err = 0.0;
    double wronskian_dev = 0.0;
    double i2_at_x1 = 0.0;
    double singular_tol = 0.0;
    bool singular = false;
    std::vector<BoundCheck> bound_checks;
};

/// Builds the full report without raising SingularI2; `singular` flags that case.
SolveReport diagnose_problem_d(const SeriesSolution& sol, const ProblemD& prob);

/// u = beta I1 + alpha I2 + F. Throws SingularI2 when |I2(x1)| <= singular_threshold(sol).
SolveReport solve_problem_d(const SeriesSolution& sol, const ProblemD& prob);

} // namespace sbvp
