#include "sbvp/grid.hpp"

#include "sbvp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string_view>

namespace sbvp {

Grid::Grid(double x1, int n) : x1_(x1), n_(n), h_(x1 / n), nodes_(static_cast<std::size_t>(n) + 1) {
    for (int i = 0; i < n; ++i) nodes_[i] = i * h_;
    nodes_[n] = x1;
}

GridPtr make_grid(double x1, int n) {
    if (!(x1 > 0.0) || !std::isfinite(x1)) {
        throw InvalidDomain("x1 must be a positive finite number");
    }
    if (n < 2) throw InvalidDomain("grid needs at least 2 intervals");
    return GridPtr(new Grid(x1, n));
}

SampledFn::SampledFn(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("SampledFn needs a grid");
    if (values_.size() != grid_->size()) {
        throw std::invalid_argument("SampledFn: expected " + std::to_string(grid_->size()) + " values, got " +
                                    std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw EvalError("non-finite sample at x = " + std::to_string(grid_->node(i)));
        }
    }
}

SampledFn::SampledFn(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("SampledFn needs a grid");
    values_.assign(grid_->size(), 0.0);
}

double SampledFn::at(double x) const {
    const Grid& g = *grid_;
    if (x <= 0.0) return values_.front();
    if (x >= g.x1()) return values_.back();
    const double s = x / g.h();
    auto i = static_cast<std::size_t>(s);
    if (i >= static_cast<std::size_t>(g.n())) i = static_cast<std::size_t>(g.n()) - 1;
    const double w = (x - g.node(i)) / (g.node(i + 1) - g.node(i));
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

void require_same_grid(const SampledFn& a, const SampledFn& b) {
    if (!a.same_grid(b)) throw GridMismatch();
}

SampledFn combine(double alpha, const SampledFn& u, double beta, const SampledFn& v) {
    require_same_grid(u, v);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * u[i] + beta * v[i];
    return SampledFn(u.grid_ptr(), std::move(out));
}

SampledFn multiply(const SampledFn& u, const SampledFn& v) {
    require_same_grid(u, v);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] * v[i];
    return SampledFn(u.grid_ptr(), std::move(out));
}

Table::Table(std::vector<double> x, std::vector<double> values) : x_(std::move(x)), values_(std::move(values)) {
    if (x_.size() != values_.size()) throw TableDomainError("table columns differ in length");
    if (x_.size() < 2) throw TableDomainError("table needs at least two rows");
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(values_[i])) {
            throw TableDomainError("table row " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(x_[i] > x_[i - 1])) {
            throw TableDomainError("table abscissae must be strictly increasing (row " + std::to_string(i) + ")");
        }
    }
}

double Table::operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
        throw TableDomainError("x = " + std::to_string(x) + " lies outside the table");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - x_.begin());
    if (hi == x_.size()) return values_.back();
    const std::size_t lo = hi - 1;
    const double w = (x - x_[lo]) / (x_[hi] - x_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

Table read_table_csv(std::istream& in) {
    std::vector<double> xs;
    std::vector<double> vs;
    std::string line;
    std::size_t offset = 0;
    bool first = true;
    while (std::getline(in, line)) {
        const std::size_t line_offset = offset;
        offset += line.size() + 1;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        double x = 0.0;
        double v = 0.0;
        const bool ok = comma != std::string_view::npos && row.find(',', comma + 1) == std::string_view::npos &&
                        parse_double(row.substr(0, comma), x) && parse_double(row.substr(comma + 1), v);
        if (!ok) {
            if (first) {
                first = false;
                continue;
            }
            throw ParseError(line_offset, "row of the form x,value");
        }
        first = false;
        xs.push_back(x);
        vs.push_back(v);
    }
    return Table(std::move(xs), std::move(vs));
}

Table read_table_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableDomainError("cannot open table file '" + path + "'");
    return read_table_csv(in);
}

double CoefficientSpec::operator()(double x) const {
    return std::visit([x](const auto& src) { return src(x); }, source_);
}

SampledFn sample(const CoefficientSpec& spec, const GridPtr& grid) {
    if (const Table* t = spec.table()) {
        if (t->x().front() > 0.0 || t->x().back() < grid->x1()) {
            throw TableDomainError("table does not span [0, x1]");
        }
    }
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = spec(grid->node(i));
    return SampledFn(grid, std::move(values));
}

double sup_norm(const SampledFn& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::fabs(v));
    return m;
}

SampledFn cumulative_integral(const SampledFn& u) {
    const double h = u.grid().h();
    std::vector<double> out(u.size());
    out[0] = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (u[i - 1] + u[i]);
    return SampledFn(u.grid_ptr(), std::move(out));
}

SampledFn cumulative_moment(const SampledFn& u) {
    // On [t_j, t_j + h] the integrand t*u(t) is quadratic; integrate it exactly.
    const Grid& g = u.grid();
    const double h = g.h();
    std::vector<double> out(u.size());
    out[0] = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double t = g.node(i - 1);
        out[i] = out[i - 1] + h * (0.5 * t * (u[i - 1] + u[i]) + h * (u[i - 1] + 2.0 * u[i]) / 6.0);
    }
    return SampledFn(u.grid_ptr(), std::move(out));
}

} // namespace sbvp
