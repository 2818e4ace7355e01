#include "sbvp/error.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace sbvp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

ParseError::ParseError(std::size_t offset, std::string expected)
    : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected),
      offset_(offset), expected_(std::move(expected)) {}

UnknownFunction::UnknownFunction(std::size_t offset, std::string name)
    : Error("unknown function '" + name + "' at offset " + std::to_string(offset)),
      offset_(offset), name_(std::move(name)) {}

ContractionViolation::ContractionViolation(double q, double max_x1)
    : Error("contraction condition violated: q = |a|_0*x1^2/2 = " + fmt(q) +
            " >= 1; maximal admissible x1 = " +
            (std::isfinite(max_x1) ? fmt(max_x1) : std::string("inf"))),
      q_(q), max_x1_(max_x1) {}

MaxTermsExceeded::MaxTermsExceeded(int cap, double tail)
    : Error("series did not reach the tolerance within " + std::to_string(cap) +
            " terms (certified tail " + fmt(tail) + ")"),
      cap_(cap), tail_(tail) {}

SingularI2::SingularI2(double i2_at_x1, double threshold)
    : Error("I2(x1) = " + fmt(i2_at_x1) + " is below the singularity threshold " + fmt(threshold)),
      i2_at_x1_(i2_at_x1), threshold_(threshold) {}

OracleSingular::OracleSingular(double dpsi_at_x1)
    : Error("shooting oracle is singular: psi'(x1) = " + fmt(dpsi_at_x1)),
      dpsi_at_x1_(dpsi_at_x1) {}

Diverged::Diverged(double x)
    : Error("initial value integration diverged near x = " + fmt(x)), x_(x) {}

} // namespace sbvp
