#pragma once

#include "sbvp/expr.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sbvp {

inline constexpr int kDefaultIntervals = 1024;

/**
 * Uniform partition of [0, x1] into n intervals.
 *
 * nodes()[0] == 0 and nodes()[n] == x1 exactly; interior nodes are i*h.
 */
class Grid {
public:
    double x1() const noexcept { return x1_; }
    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    std::size_t size() const noexcept { return nodes_.size(); }

    bool operator==(const Grid& other) const noexcept { return x1_ == other.x1_ && n_ == other.n_; }

private:
    friend std::shared_ptr<const Grid> make_grid(double x1, int n);
    Grid(double x1, int n);

    double x1_;
    int n_;
    double h_;
    std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws InvalidDomain unless x1 > 0 (finite) and n >= 2.
GridPtr make_grid(double x1, int n);

/**
 * A function known by its values at the nodes of a grid and interpreted as
 * the piecewise-linear interpolant through them.
 */
class SampledFn {
public:
    /// Throws std::invalid_argument on a length mismatch and EvalError on non-finite entries.
    SampledFn(GridPtr grid, std::vector<double> values);

    /// All-zero function.
    explicit SampledFn(GridPtr grid);

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    /// Piecewise-linear interpolant; x is clamped to [0, x1].
    double at(double x) const;

    bool same_grid(const SampledFn& other) const noexcept {
        return grid_ == other.grid_ || *grid_ == *other.grid_;
    }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Throws GridMismatch unless all functions share one grid.
void require_same_grid(const SampledFn& a, const SampledFn& b);

/// Node-wise linear combination alpha*u + beta*v.
SampledFn combine(double alpha, const SampledFn& u, double beta, const SampledFn& v);

/// Node-wise product u*v.
SampledFn multiply(const SampledFn& u, const SampledFn& v);

/// Tabulated coefficient: strictly increasing abscissae with linear interpolation.
class Table {
public:
    /// Requires at least two points, strictly increasing finite x and finite values.
    Table(std::vector<double> x, std::vector<double> values);

    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Linear interpolation; throws TableDomainError outside [x.front(), x.back()].
    double operator()(double x) const;

private:
    std::vector<double> x_;
    std::vector<double> values_;
};

/// Reads a two-column `x,value` CSV. A non-numeric first row is treated as a header.
Table read_table_csv(std::istream& in);
Table read_table_csv_file(const std::string& path);

/// Source of a coefficient a(x) or f(x): a parsed expression or a table.
class CoefficientSpec {
public:
    CoefficientSpec(Expr expr) : source_(std::move(expr)) {}
    CoefficientSpec(Table table) : source_(std::move(table)) {}

    double operator()(double x) const;

    /// Non-null when the coefficient is an expression.
    const Expr* expr() const noexcept { return std::get_if<Expr>(&source_); }
    const Table* table() const noexcept { return std::get_if<Table>(&source_); }

private:
    std::variant<Expr, Table> source_;
};

/// values[i] = spec(x_i). Throws TableDomainError if a table does not span [0, x1].
SampledFn sample(const CoefficientSpec& spec, const GridPtr& grid);

/// Maximum of |u| over the nodes; stands in for both |.|_0 and |.|_1.
double sup_norm(const SampledFn& u);

/// U[i] = integral over [0, x_i] of the interpolant (composite trapezoid, prefix sums).
SampledFn cumulative_integral(const SampledFn& u);

/// M[i] = integral over [0, x_i] of t*u(t), exact for the piecewise-linear interpolant.
SampledFn cumulative_moment(const SampledFn& u);

} // namespace sbvp
