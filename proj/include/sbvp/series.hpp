#pragma once

#include "sbvp/grid.hpp"

#include <functional>
#include <limits>

namespace sbvp {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr int kDefaultMaxTerms = 10000;

/**
 * Proof that the iteration operator is a contraction on [0, x1]:
 * q = |a|_0 * x1^2 / 2 < 1. Only contraction_ratio() constructs one.
 */
struct ContractionCertificate {
    double a_sup = 0.0;
    double x1 = 0.0;
    double q = 0.0;
    double margin = 1.0; ///< 1 - q
};

/// Throws ContractionViolation (carrying q and sqrt(2/a_sup)) when q >= 1.
ContractionCertificate contraction_ratio(double a_sup, double x1);

/// contraction_ratio(sup_norm(a), a.grid().x1()).
ContractionCertificate certify(const SampledFn& a);

/**
 * (Bu)(x) = int_0^x int_y^x1 a(t) u(t) dt dy.
 *
 * Evaluated in O(n) through the swapped-order form
 *   (Bu)(x) = int_0^x t a u dt + x int_x^x1 a u dt
 * with every integral exact for the piecewise-linear interpolant of a*u.
 */
SampledFn apply_B(const SampledFn& u, const SampledFn& a);

/// O(n^2) nested transcription of the same double integral. Test oracle for apply_B.
SampledFn apply_B_reference(const SampledFn& u, const SampledFn& a);

/**
 * g(x) = -int_0^x int_y^x1 f(t) dt dy, so that u = Bu + g + c1 x + c2 is
 * equivalent to u'' + a u = f with u(0) = c2, u'(x1) = c1.
 */
SampledFn compute_g(const SampledFn& f);

struct SeriesOptions {
    double tol = kDefaultTolerance;
    int max_terms = kDefaultMaxTerms;
};

struct SeriesSum {
    SampledFn value;
    int terms = 0;     ///< number of summed terms, seed included
    double tail = 0.0; ///< certified bound on the neglected remainder
};

/// Called with (k, B^k seed) for every summed term, k = 0 first.
using TermObserver = std::function<void(int, const SampledFn&)>;

/**
 * Sum of B^k(seed) for k = 0..m, with m the first index whose geometric tail
 * 2 |seed| q^(m+1) / (1 - q) is at most opts.tol.
 *
 * Throws MaxTermsExceeded if that needs more than opts.max_terms terms.
 */
SeriesSum sum_series(const SampledFn& seed, const SampledFn& a, const ContractionCertificate& cert,
                     const SeriesOptions& opts = {}, const TermObserver& observer = {});

enum class SeedKind { Identity, One, G };

/**
 * First derivative of a converged series from its integral form:
 *   I1' = 1 + int_x^x1 a I1,  I2' = int_x^x1 a I2,  F' = -int_x^x1 f + int_x^x1 a F.
 * `f` is required for SeedKind::G (MissingF otherwise).
 */
SampledFn derivative_of(const SampledFn& series_sum, SeedKind kind, const SampledFn& a,
                        const SampledFn* f = nullptr);

/// Largest observed value of (lhs - rhs) for one family of inequalities; <= 0 means it held.
struct BoundTrace {
    double worst_excess = -std::numeric_limits<double>::infinity();
    int worst_k = 0;
    int checked = 0;

    void record(int k, double excess);
};

/// Per-term bound traces gathered while the three series are summed.
struct TermBounds {
    BoundTrace iterate_I1; ///< |B^k id|  <= 2 |id|_1 q^k
    BoundTrace iterate_I2; ///< |B^k 1|   <= 2 q^k
    BoundTrace iterate_F;  ///< |B^k g|   <= 2 |g|_1 q^k
    BoundTrace a_terms;    ///< |a_k(x)|  <  q^k x
    BoundTrace b_terms;    ///< |b_k(x)|  <  2 q^k
};

struct SeriesSolution {
    SampledFn a;
    SampledFn f;
    SampledFn g;
    SampledFn I1, I2, F;
    SampledFn dI1, dI2, dF;
    int terms_I1 = 0, terms_I2 = 0, terms_F = 0;
    double tail_I1 = 0.0, tail_I2 = 0.0, tail_F = 0.0;
    ContractionCertificate certificate;
    TermBounds bounds;
    SeriesOptions options;

    const Grid& grid() const { return a.grid(); }
};

/// I1, I2 and F with derivatives. The three series are summed concurrently.
SeriesSolution fundamental_system(const SampledFn& a, const SampledFn& f, const ContractionCertificate& cert,
                                  const SeriesOptions& opts = {});

/// certify(a) followed by fundamental_system.
SeriesSolution fundamental_system(const SampledFn& a, const SampledFn& f, const SeriesOptions& opts = {});

} // namespace sbvp
