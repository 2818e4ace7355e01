#include "sbvp/oracle.hpp"

#include "sbvp/error.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace sbvp {

namespace {

constexpr double kDivergence = 1e100;

struct Coefficients {
    double a;
    double f;
};

// `at(i, half)` returns the coefficients at node i (half = false) or at the
// midpoint of [x_i, x_{i+1}] (half = true).
template <typename CoefAt>
IvpTrajectory integrate(const GridPtr& grid, CoefAt&& at, double u0, double du0) {
    const std::size_t n = static_cast<std::size_t>(grid->n());
    IvpTrajectory traj{grid, std::vector<double>(n + 1), std::vector<double>(n + 1)};
    double u = u0;
    double v = du0;
    traj.u[0] = u;
    traj.du[0] = v;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = grid->node(i + 1) - grid->node(i);
        const Coefficients c0 = at(i, false);
        const Coefficients cm = at(i, true);
        const Coefficients c1 = at(i + 1, false);

        const double k1u = v;
        const double k1v = c0.f - c0.a * u;
        const double k2u = v + 0.5 * h * k1v;
        const double k2v = cm.f - cm.a * (u + 0.5 * h * k1u);
        const double k3u = v + 0.5 * h * k2v;
        const double k3v = cm.f - cm.a * (u + 0.5 * h * k2u);
        const double k4u = v + h * k3v;
        const double k4v = c1.f - c1.a * (u + h * k3u);

        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!(std::fabs(u) <= kDivergence) || !(std::fabs(v) <= kDivergence)) {
            throw Diverged(grid->node(i + 1));
        }
        traj.u[i + 1] = u;
        traj.du[i + 1] = v;
    }
    return traj;
}

template <typename Solve>
OracleFundamental shoot(const GridPtr& grid, Solve&& solve) {
    auto phi_job = std::async(std::launch::async, [&] { return solve(1.0, 0.0, false); });
    auto p_job = std::async(std::launch::async, [&] { return solve(0.0, 0.0, true); });
    const IvpTrajectory psi = solve(0.0, 1.0, false);
    const IvpTrajectory phi = phi_job.get();
    const IvpTrajectory p = p_job.get();

    double psi_sup = 0.0;
    for (double v : psi.u) psi_sup = std::max(psi_sup, std::fabs(v));
    const double dpsi = psi.du.back();
    if (!(std::fabs(dpsi) > 1e-12 * (1.0 + psi_sup))) throw OracleSingular(dpsi);

    const double k_phi = phi.du.back() / dpsi;
    const double k_p = p.du.back() / dpsi;
    const std::size_t size = psi.u.size();
    std::vector<double> i1(size), i2(size), fp(size);
    for (std::size_t i = 0; i < size; ++i) {
        i1[i] = psi.u[i] / dpsi;
        i2[i] = phi.u[i] - k_phi * psi.u[i];
        fp[i] = p.u[i] - k_p * psi.u[i];
    }
    const double wronskian = phi.u.back() * psi.du.back() - phi.du.back() * psi.u.back();
    return OracleFundamental{SampledFn(grid, std::move(i1)), SampledFn(grid, std::move(i2)),
                             SampledFn(grid, std::move(fp)), dpsi, wronskian};
}

} // namespace

IvpTrajectory rk4_ivp(const SampledFn& a, const SampledFn& f, double u0, double du0) {
    require_same_grid(a, f);
    auto at = [&](std::size_t i, bool half) {
        if (!half) return Coefficients{a[i], f[i]};
        return Coefficients{0.5 * (a[i] + a[i + 1]), 0.5 * (f[i] + f[i + 1])};
    };
    return integrate(a.grid_ptr(), at, u0, du0);
}

IvpTrajectory rk4_ivp(const GridPtr& grid, const CoefficientFn& a, const CoefficientFn& f, double u0,
                      double du0) {
    auto at = [&](std::size_t i, bool half) {
        const double x = half ? 0.5 * (grid->node(i) + grid->node(i + 1)) : grid->node(i);
        return Coefficients{a(x), f(x)};
    };
    return integrate(grid, at, u0, du0);
}

OracleFundamental oracle_fundamental(const SampledFn& a, const SampledFn& f) {
    require_same_grid(a, f);
    const SampledFn zero(a.grid_ptr());
    return shoot(a.grid_ptr(), [&](double u0, double du0, bool forced) {
        return rk4_ivp(a, forced ? f : zero, u0, du0);
    });
}

OracleFundamental oracle_fundamental(const GridPtr& grid, const CoefficientFn& a, const CoefficientFn& f) {
    const CoefficientFn zero = [](double) { return 0.0; };
    return shoot(grid, [&](double u0, double du0, bool forced) {
        return rk4_ivp(grid, a, forced ? f : zero, u0, du0);
    });
}

namespace {

double max_rel_err(const SampledFn& i1, const SampledFn& i2, const SampledFn& fp, const OracleFundamental& oracle) {
    require_same_grid(i1, oracle.I1);
    double worst = 0.0;
    auto scan = [&worst](const SampledFn& s, const SampledFn& o) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            worst = std::max(worst, std::fabs(s[i] - o[i]) / (1.0 + std::fabs(o[i])));
        }
    };
    scan(i1, oracle.I1);
    scan(i2, oracle.I2);
    scan(fp, oracle.F);
    return worst;
}

} // namespace

double compare(const SeriesSolution& series, const OracleFundamental& oracle) {
    return max_rel_err(series.I1, series.I2, series.F, oracle);
}

double compare(const OracleFundamental& lhs, const OracleFundamental& rhs) {
    return max_rel_err(lhs.I1, lhs.I2, lhs.F, rhs);
}

} // namespace sbvp
