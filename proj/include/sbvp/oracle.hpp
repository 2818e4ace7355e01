#pragma once

#include "sbvp/series.hpp"

#include <functional>
#include <vector>

namespace sbvp {

// Independent check of the series: classical RK4 from x = 0 plus shooting
// recombination. Shares no quadrature code with the series path.

using CoefficientFn = std::function<double(double)>;

struct IvpTrajectory {
    GridPtr grid;
    std::vector<double> u;
    std::vector<double> du;
};

/// u'' = f - a u from (u0, du0) at x = 0. Half-step coefficients are linear
/// interpolants of the samples. Throws Diverged if the state exceeds 1e100.
IvpTrajectory rk4_ivp(const SampledFn& a, const SampledFn& f, double u0, double du0);

/// Same integration with coefficients evaluated directly at every stage.
IvpTrajectory rk4_ivp(const GridPtr& grid, const CoefficientFn& a, const CoefficientFn& f, double u0, double du0);

struct OracleFundamental {
    SampledFn I1;
    SampledFn I2;
    SampledFn F;
    double dpsi_at_x1 = 0.0; ///< psi'(x1), psi the IVP solution with (u, u')(0) = (0, 1)
    double wronskian = 0.0;  ///< phi psi' - phi' psi at x1; equals 1 for exact solutions
};

/**
 * Mixed-endpoint solutions rebuilt from three initial value problems:
 *   I1 = psi / psi'(x1),  I2 = phi - phi'(x1)/psi'(x1) psi,  F = p - p'(x1)/psi'(x1) psi.
 * Throws OracleSingular when |psi'(x1)| <= 1e-12 (1 + sup |psi|).
 */
OracleFundamental oracle_fundamental(const SampledFn& a, const SampledFn& f);

/// Variant with directly evaluated coefficients (used when an expression is available).
OracleFundamental oracle_fundamental(const GridPtr& grid, const CoefficientFn& a, const CoefficientFn& f);

/// max over I1, I2, F and all nodes of |series - oracle| / (1 + |oracle|).
double compare(const SeriesSolution& series, const OracleFundamental& oracle);
double compare(const OracleFundamental& lhs, const OracleFundamental& rhs);

} // namespace sbvp
