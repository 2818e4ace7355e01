#pragma once

#include "sbvp/grid.hpp"
#include "sbvp/series.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sbvp::cli {

enum class Command { Solve, Fundamental, Verify };
enum class OutputFormat { Json, Csv };

enum ExitCode : int {
    kOk = 0,
    kContractionViolation = 2,
    kSingularI2 = 3,
    kInputError = 4,
    kVerificationFailure = 5,
};

struct RunConfig {
    Command command = Command::Solve;
    std::optional<CoefficientSpec> a_spec;
    std::optional<CoefficientSpec> f_spec;
    double x1 = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    int n = kDefaultIntervals;
    double tol = kDefaultTolerance;
    int max_terms = kDefaultMaxTerms;
    OutputFormat format = OutputFormat::Json;
    std::string out_path; ///< empty: write to `out`
};

/// Reads SOLVER_MAX_TERMS; falls back to the built-in cap when unset or malformed.
int max_terms_from_env();

/// Executes a configured run. Machine output goes to `out` (or --out), messages to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including the program name) and runs it.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sbvp::cli
