#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbvp {

// Root of every error the library raises. Catch this to handle "any solver
// failure"; catch the concrete types to map onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownFunction : public Error {
public:
    UnknownFunction(std::size_t offset, std::string name);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

class EvalError : public Error {
public:
    using Error::Error;
};

class InvalidDomain : public Error {
public:
    using Error::Error;
};

class TableDomainError : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    GridMismatch() : Error("functions are sampled on different grids") {}
};

/// Raised when |a|_0 * x1^2 / 2 >= 1, i.e. the series is not certified to converge.
class ContractionViolation : public Error {
public:
    ContractionViolation(double q, double max_x1);

    double q() const noexcept { return q_; }
    /// sqrt(2 / |a|_0): the largest interval length for which the certificate holds.
    double max_x1() const noexcept { return max_x1_; }

private:
    double q_;
    double max_x1_;
};

class MaxTermsExceeded : public Error {
public:
    MaxTermsExceeded(int cap, double tail);

    int cap() const noexcept { return cap_; }
    double tail() const noexcept { return tail_; }

private:
    int cap_;
    double tail_;
};

class MissingF : public Error {
public:
    MissingF() : Error("derivative of the particular solution needs f") {}
};

class SingularI2 : public Error {
public:
    SingularI2(double i2_at_x1, double threshold);

    double i2_at_x1() const noexcept { return i2_at_x1_; }
    double threshold() const noexcept { return threshold_; }

private:
    double i2_at_x1_;
    double threshold_;
};

class OracleSingular : public Error {
public:
    explicit OracleSingular(double dpsi_at_x1);

    double dpsi_at_x1() const noexcept { return dpsi_at_x1_; }

private:
    double dpsi_at_x1_;
};

class Diverged : public Error {
public:
    explicit Diverged(double x);

    double x() const noexcept { return x_; }

private:
    double x_;
};

} // namespace sbvp
