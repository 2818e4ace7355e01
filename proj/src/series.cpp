#include "sbvp/series.hpp"

#include "sbvp/error.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace sbvp {

ContractionCertificate contraction_ratio(double a_sup, double x1) {
    if (!(a_sup >= 0.0) || !std::isfinite(a_sup)) throw InvalidDomain("|a|_0 must be finite and non-negative");
    if (!(x1 > 0.0) || !std::isfinite(x1)) throw InvalidDomain("x1 must be positive and finite");
    const double q = a_sup * x1 * x1 / 2.0;
    if (!(q < 1.0)) {
        throw ContractionViolation(q, std::sqrt(2.0 / a_sup));
    }
    return ContractionCertificate{a_sup, x1, q, 1.0 - q};
}

ContractionCertificate certify(const SampledFn& a) {
    return contraction_ratio(sup_norm(a), a.grid().x1());
}

namespace {

// int_0^x int_y^x1 w(t) dt dy for the piecewise-linear interpolant of w.
SampledFn double_integral(const SampledFn& w) {
    const SampledFn total = cumulative_integral(w);
    const SampledFn moment = cumulative_moment(w);
    const Grid& g = w.grid();
    const double full = total.back();
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = moment[i] + g.node(i) * (full - total[i]);
    }
    return SampledFn(w.grid_ptr(), std::move(out));
}

} // namespace

SampledFn apply_B(const SampledFn& u, const SampledFn& a) {
    return double_integral(multiply(a, u));
}

SampledFn apply_B_reference(const SampledFn& u, const SampledFn& a) {
    require_same_grid(u, a);
    const Grid& g = a.grid();
    const std::size_t n = static_cast<std::size_t>(g.n());
    std::vector<double> w(n + 1);
    for (std::size_t i = 0; i <= n; ++i) w[i] = a[i] * u[i];

    // Inner integral G(y_j) = int_{y_j}^{x1} w, summed cell by cell for every j.
    std::vector<double> inner(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        double s = 0.0;
        for (std::size_t k = j; k < n; ++k) {
            s += 0.5 * (g.node(k + 1) - g.node(k)) * (w[k] + w[k + 1]);
        }
        inner[j] = s;
    }

    // Outer integral of G, which is quadratic on each cell: trapezoid plus the
    // endpoint-derivative correction makes it exact (G' = -w).
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double hj = g.node(j + 1) - g.node(j);
            s += 0.5 * hj * (inner[j] + inner[j + 1]) + hj * hj * (w[j + 1] - w[j]) / 12.0;
        }
        out[i] = s;
    }
    return SampledFn(a.grid_ptr(), std::move(out));
}

SampledFn compute_g(const SampledFn& f) {
    // Integrating u'' = f - a u twice puts f on the other side from a u.
    return combine(-1.0, double_integral(f), 0.0, f);
}

SeriesSum sum_series(const SampledFn& seed, const SampledFn& a, const ContractionCertificate& cert,
                     const SeriesOptions& opts, const TermObserver& observer) {
    require_same_grid(seed, a);
    if (!(opts.tol > 0.0)) throw InvalidDomain("series tolerance must be positive");
    if (opts.max_terms < 1) throw InvalidDomain("max_terms must be at least 1");
    if (cert.x1 != a.grid().x1() || sup_norm(a) > cert.a_sup) {
        throw InvalidDomain("contraction certificate does not belong to this coefficient");
    }

    if (observer) observer(0, seed);
    const double seed_norm = sup_norm(seed);
    const double q = cert.q;
    if (q == 0.0 || seed_norm == 0.0) return SeriesSum{seed, 1, 0.0};

    std::vector<double> sum(seed.values().begin(), seed.values().end());
    SampledFn term = seed;
    double q_pow = q; // q^(m+1)
    int m = 0;
    double tail = 2.0 * seed_norm * q_pow / (1.0 - q);
    while (tail > opts.tol) {
        if (m + 1 >= opts.max_terms) throw MaxTermsExceeded(opts.max_terms, tail);
        term = apply_B(term, a);
        ++m;
        if (observer) observer(m, term);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
        q_pow *= q;
        tail = 2.0 * seed_norm * q_pow / (1.0 - q);
    }
    return SeriesSum{SampledFn(seed.grid_ptr(), std::move(sum)), m + 1, tail};
}

SampledFn derivative_of(const SampledFn& series_sum, SeedKind kind, const SampledFn& a, const SampledFn* f) {
    require_same_grid(series_sum, a);
    if (kind == SeedKind::G) {
        if (f == nullptr) throw MissingF();
        require_same_grid(series_sum, *f);
    }
    const SampledFn au = cumulative_integral(multiply(a, series_sum));
    const double au_full = au.back();
    std::vector<double> out(series_sum.size());
    switch (kind) {
    case SeedKind::Identity:
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 + (au_full - au[i]);
        break;
    case SeedKind::One:
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = au_full - au[i];
        break;
    case SeedKind::G: {
        const SampledFn fi = cumulative_integral(*f);
        const double f_full = fi.back();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -(f_full - fi[i]) + (au_full - au[i]);
        break;
    }
    }
    return SampledFn(series_sum.grid_ptr(), std::move(out));
}

void BoundTrace::record(int k, double excess) {
    ++checked;
    if (excess > worst_excess) {
        worst_excess = excess;
        worst_k = k;
    }
}

namespace {

TermObserver iterate_bound(BoundTrace& trace, double seed_norm, double q) {
    return [&trace, seed_norm, q](int k, const SampledFn& term) {
        if (k == 0) return;
        trace.record(k, sup_norm(term) - 2.0 * seed_norm * std::pow(q, k));
    };
}

} // namespace

SeriesSolution fundamental_system(const SampledFn& a, const SampledFn& f, const ContractionCertificate& cert,
                                  const SeriesOptions& opts) {
    require_same_grid(a, f);
    const GridPtr& grid = a.grid_ptr();
    const double q = cert.q;

    SampledFn identity(grid, std::vector<double>(grid->nodes().begin(), grid->nodes().end()));
    SampledFn one(grid, std::vector<double>(grid->size(), 1.0));
    SampledFn g = compute_g(f);

    TermBounds bounds;

    auto run_I1 = std::async(std::launch::async, [&] {
        TermObserver iterate = iterate_bound(bounds.iterate_I1, sup_norm(identity), q);
        return sum_series(identity, a, cert, opts, [&](int k, const SampledFn& term) {
            iterate(k, term);
            if (k == 0) return;
            const double qk = std::pow(q, k);
            double excess = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < term.size(); ++i) {
                excess = std::max(excess, std::fabs(term[i]) - qk * grid->node(i));
            }
            bounds.a_terms.record(k, excess);
        });
    });
    auto run_I2 = std::async(std::launch::async, [&] {
        TermObserver iterate = iterate_bound(bounds.iterate_I2, 1.0, q);
        return sum_series(one, a, cert, opts, [&](int k, const SampledFn& term) {
            iterate(k, term);
            if (k == 0) return;
            bounds.b_terms.record(k, sup_norm(term) - 2.0 * std::pow(q, k));
        });
    });
    TermObserver iterate_F = iterate_bound(bounds.iterate_F, sup_norm(g), q);
    SeriesSum F = sum_series(g, a, cert, opts, iterate_F);
    SeriesSum I1 = run_I1.get();
    SeriesSum I2 = run_I2.get();

    SampledFn dI1 = derivative_of(I1.value, SeedKind::Identity, a);
    SampledFn dI2 = derivative_of(I2.value, SeedKind::One, a);
    SampledFn dF = derivative_of(F.value, SeedKind::G, a, &f);

    return SeriesSolution{
        a,
        f,
        std::move(g),
        std::move(I1.value),
        std::move(I2.value),
        std::move(F.value),
        std::move(dI1),
        std::move(dI2),
        std::move(dF),
        I1.terms,
        I2.terms,
        F.terms,
        I1.tail,
        I2.tail,
        F.tail,
        cert,
        bounds,
        opts,
    };
}

SeriesSolution fundamental_system(const SampledFn& a, const SampledFn& f, const SeriesOptions& opts) {
    return fundamental_system(a, f, certify(a), opts);
}

} // namespace sbvp
