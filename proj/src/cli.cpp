#include "sbvp/cli.hpp"

#include "sbvp/bvp.hpp"
#include "sbvp/error.hpp"
#include "sbvp/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace sbvp::cli {

namespace {

using Json = nlohmann::ordered_json;

// Thresholds used by `verify`. Discretisation-dependent ones are quoted for
// h = 1/1024 and scaled by (h * 1024)^2 on coarser grids.
constexpr double kIdentityTol = 1e-12;
constexpr double kFixedPointFactor = 10.0;
constexpr double kWronskianTol = 1e-6;
constexpr double kResidualTol = 1e-5;
constexpr double kOracleTol = 1e-5;
constexpr double kOracleWronskianTol = 1e-8;

std::string shortest(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

Json to_json(std::span<const double> values) {
    Json arr = Json::array();
    for (double v : values) arr.push_back(v);
    return arr;
}

struct Check {
    std::string name;
    double value;
    double limit;
    bool pass;
};

Check at_most(std::string name, double value, double limit) {
    return Check{std::move(name), value, limit, value <= limit};
}

Json series_header(const RunConfig& config, const SeriesSolution& sol) {
    Json j;
    j["x1"] = config.x1;
    j["n"] = config.n;
    j["tol"] = config.tol;
    j["q"] = sol.certificate.q;
    j["terms"] = Json{{"I1", sol.terms_I1}, {"I2", sol.terms_I2}, {"F", sol.terms_F}};
    j["tails"] = Json{{"I1", sol.tail_I1}, {"I2", sol.tail_I2}, {"F", sol.tail_F}};
    j["i2_at_x1"] = sol.I2.back();
    return j;
}

void csv_preamble(std::ostream& os, const RunConfig& config, const SeriesSolution& sol) {
    os << "# x1=" << shortest(config.x1) << "\n";
    os << "# n=" << config.n << "\n";
    os << "# tol=" << shortest(config.tol) << "\n";
    os << "# q=" << shortest(sol.certificate.q) << "\n";
    os << "# terms=I1:" << sol.terms_I1 << ",I2:" << sol.terms_I2 << ",F:" << sol.terms_F << "\n";
    os << "# tails=I1:" << shortest(sol.tail_I1) << ",I2:" << shortest(sol.tail_I2) << ",F:" << shortest(sol.tail_F)
       << "\n";
    os << "# i2_at_x1=" << shortest(sol.I2.back()) << "\n";
}

Json report_json(const SolveReport& r) {
    Json j;
    j["boundary_err"] = Json::array({r.boundary_err_left, r.boundary_err_right});
    j["residual_max"] = r.residual_max;
    j["fixedpoint_err"] = r.fixedpoint_err;
    j["wronskian_dev"] = r.wronskian_dev;
    j["singular_tol"] = r.singular_tol;
    j["singular"] = r.singular;
    Json checks = Json::array();
    for (const BoundCheck& c : r.bound_checks) {
        checks.push_back(Json{{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    }
    j["bound_checks"] = std::move(checks);
    return j;
}

int emit_solve(const RunConfig& config, const SeriesSolution& sol, std::ostream& os, std::ostream& err) {
    const SolveReport report = diagnose_problem_d(sol, ProblemD{config.alpha, config.beta});
    const auto nodes = sol.grid().nodes();
    if (config.format == OutputFormat::Json) {
        Json j = series_header(config, sol);
        j["alpha"] = config.alpha;
        j["beta"] = config.beta;
        j["c1"] = report.c1;
        j["c2"] = report.c2;
        j["nodes"] = to_json(nodes);
        if (report.u) {
            j["u"] = to_json(report.u->values());
            j["du"] = to_json(report.du->values());
        }
        j["report"] = report_json(report);
        os << j.dump(2) << "\n";
    } else {
        csv_preamble(os, config, sol);
        os << "# alpha=" << shortest(config.alpha) << "\n# beta=" << shortest(config.beta) << "\n";
        os << "# c1=" << shortest(report.c1) << "\n# c2=" << shortest(report.c2) << "\n";
        os << "# boundary_err=" << shortest(report.boundary_err_left) << "," << shortest(report.boundary_err_right)
           << "\n";
        os << "# residual_max=" << shortest(report.residual_max) << "\n";
        os << "# fixedpoint_err=" << shortest(report.fixedpoint_err) << "\n";
        os << "# wronskian_dev=" << shortest(report.wronskian_dev) << "\n";
        for (const BoundCheck& c : report.bound_checks) {
            os << "# bound " << c.name << "=" << (c.pass ? "pass" : "fail") << "\n";
        }
        if (report.u) {
            os << "x,u,du\n";
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                os << shortest(nodes[i]) << "," << shortest((*report.u)[i]) << "," << shortest((*report.du)[i]) << "\n";
            }
        }
    }
    if (report.singular) {
        err << "error: " << SingularI2(report.i2_at_x1, report.singular_tol).what() << "\n";
        return kSingularI2;
    }
    return kOk;
}

int emit_fundamental(const RunConfig& config, const SeriesSolution& sol, std::ostream& os) {
    const auto nodes = sol.grid().nodes();
    if (config.format == OutputFormat::Json) {
        Json j = series_header(config, sol);
        j["nodes"] = to_json(nodes);
        j["I1"] = to_json(sol.I1.values());
        j["I2"] = to_json(sol.I2.values());
        j["F"] = to_json(sol.F.values());
        j["dI1"] = to_json(sol.dI1.values());
        j["dI2"] = to_json(sol.dI2.values());
        j["dF"] = to_json(sol.dF.values());
        os << j.dump(2) << "\n";
    } else {
        csv_preamble(os, config, sol);
        os << "x,I1,I2,F,dI1,dI2,dF\n";
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            os << shortest(nodes[i]) << "," << shortest(sol.I1[i]) << "," << shortest(sol.I2[i]) << ","
               << shortest(sol.F[i]) << "," << shortest(sol.dI1[i]) << "," << shortest(sol.dI2[i]) << ","
               << shortest(sol.dF[i]) << "\n";
        }
    }
    return kOk;
}

std::vector<Check> verification_checks(const RunConfig& config, const SeriesSolution& sol, double& oracle_err) {
    const Grid& grid = sol.grid();
    const double scale = std::max(1.0, std::pow(grid.h() * 1024.0, 2));
    std::vector<Check> checks;

    checks.push_back(at_most("I1(0)=0", std::fabs(sol.I1.front()), kIdentityTol));
    checks.push_back(at_most("I2(0)=1", std::fabs(sol.I2.front() - 1.0), kIdentityTol));
    checks.push_back(at_most("F(0)=0", std::fabs(sol.F.front()), kIdentityTol));
    checks.push_back(at_most("dI1(x1)=1", std::fabs(sol.dI1.back() - 1.0), kIdentityTol));
    checks.push_back(at_most("dI2(x1)=0", std::fabs(sol.dI2.back()), kIdentityTol));
    checks.push_back(at_most("dF(x1)=0", std::fabs(sol.dF.back()), kIdentityTol));

    for (const BoundCheck& b : bound_checks(sol)) {
        checks.push_back(Check{b.name, b.value, b.limit, b.pass});
    }

    const SampledFn zero(sol.a.grid_ptr());
    const Residuals r1 = residual_report(sol.I1, sol.a, zero, 1.0, 0.0, zero);
    const Residuals r2 = residual_report(sol.I2, sol.a, zero, 0.0, 1.0, zero);
    const Residuals rf = residual_report(sol.F, sol.a, sol.f, 0.0, 0.0, sol.g);
    const double fp_tol = kFixedPointFactor * config.tol;
    checks.push_back(at_most("ode_residual_I1", r1.residual_max, kResidualTol * scale));
    checks.push_back(at_most("ode_residual_I2", r2.residual_max, kResidualTol * scale));
    checks.push_back(at_most("ode_residual_F", rf.residual_max, kResidualTol * scale));
    checks.push_back(at_most("fixed_point_I1", r1.fixedpoint_err, fp_tol));
    checks.push_back(at_most("fixed_point_I2", r2.fixedpoint_err, fp_tol));
    checks.push_back(at_most("fixed_point_F", rf.fixedpoint_err, fp_tol));

    checks.push_back(at_most("wronskian", wronskian_check(sol).dev, kWronskianTol * scale));

    const SolveReport report = solve_problem_d(sol, ProblemD{config.alpha, config.beta});
    const double data = 1.0 + std::fabs(config.alpha) + std::fabs(config.beta);
    checks.push_back(at_most("problem_d_left", report.boundary_err_left, kIdentityTol));
    checks.push_back(at_most("problem_d_right", report.boundary_err_right, kIdentityTol));
    checks.push_back(at_most("problem_d_fixed_point", report.fixedpoint_err, fp_tol * data));
    checks.push_back(at_most("problem_d_residual", report.residual_max, kResidualTol * scale * data));

    const CoefficientSpec& a_spec = *config.a_spec;
    const CoefficientSpec& f_spec = *config.f_spec;
    const OracleFundamental oracle = oracle_fundamental(
        sol.a.grid_ptr(), [&](double x) { return a_spec(x); }, [&](double x) { return f_spec(x); });
    oracle_err = compare(sol, oracle);
    checks.push_back(at_most("oracle_max_rel_err", oracle_err, kOracleTol * scale));
    checks.push_back(at_most("oracle_wronskian", std::fabs(oracle.wronskian - 1.0), kOracleWronskianTol * scale));
    return checks;
}

int emit_verify(const RunConfig& config, const SeriesSolution& sol, std::ostream& os, std::ostream& err) {
    double oracle_err = 0.0;
    const std::vector<Check> checks = verification_checks(config, sol, oracle_err);
    const bool passed = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    if (config.format == OutputFormat::Json) {
        Json j = series_header(config, sol);
        j["oracle_max_rel_err"] = oracle_err;
        Json arr = Json::array();
        for (const Check& c : checks) {
            arr.push_back(Json{{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
        }
        j["checks"] = std::move(arr);
        j["passed"] = passed;
        os << j.dump(2) << "\n";
    } else {
        csv_preamble(os, config, sol);
        os << "# oracle_max_rel_err=" << shortest(oracle_err) << "\n";
        os << "check,value,limit,pass\n";
        for (const Check& c : checks) {
            os << c.name << "," << shortest(c.value) << "," << shortest(c.limit) << "," << (c.pass ? "true" : "false")
               << "\n";
        }
    }
    if (!passed) {
        for (const Check& c : checks) {
            if (!c.pass) err << "check failed: " << c.name << " = " << shortest(c.value) << " > " << shortest(c.limit) << "\n";
        }
        return kVerificationFailure;
    }
    return kOk;
}

int execute(const RunConfig& config, std::ostream& os, std::ostream& err) {
    if (!config.a_spec || !config.f_spec) throw InvalidDomain("both a(x) and f(x) must be given");
    const GridPtr grid = make_grid(config.x1, config.n);
    const SampledFn a = sample(*config.a_spec, grid);
    const SampledFn f = sample(*config.f_spec, grid);
    const SeriesOptions opts{config.tol, config.max_terms};
    const SeriesSolution sol = fundamental_system(a, f, certify(a), opts);

    switch (config.command) {
    case Command::Solve: return emit_solve(config, sol, os, err);
    case Command::Fundamental: return emit_fundamental(config, sol, os);
    case Command::Verify: return emit_verify(config, sol, os, err);
    }
    return kInputError;
}

} // namespace

int max_terms_from_env() {
    const char* raw = std::getenv("SOLVER_MAX_TERMS");
    if (raw == nullptr) return kDefaultMaxTerms;
    const std::string_view text(raw);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) return kDefaultMaxTerms;
    return value;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.out_path.empty()) return execute(config, out, err);
        std::ofstream file(config.out_path);
        if (!file) {
            err << "error: cannot open output file '" << config.out_path << "'\n";
            return kInputError;
        }
        return execute(config, file, err);
    } catch (const ContractionViolation& e) {
        err << "error: " << e.what() << "\n";
        return kContractionViolation;
    } catch (const MaxTermsExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kContractionViolation;
    } catch (const SingularI2& e) {
        err << "error: " << e.what() << "\n";
        return kSingularI2;
    } catch (const OracleSingular& e) {
        err << "verification failed: " << e.what() << "\n";
        return kVerificationFailure;
    } catch (const Diverged& e) {
        err << "verification failed: " << e.what() << "\n";
        return kVerificationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

namespace {

struct RawOptions {
    std::string a_expr;
    std::string a_table;
    std::string f_expr;
    std::string f_table;
    std::string format = "json";
};

void add_options(CLI::App& cmd, RunConfig& config, RawOptions& raw) {
    auto* a = cmd.add_option("--a", raw.a_expr, "coefficient a(x) as an expression");
    auto* at = cmd.add_option("--a-table", raw.a_table, "coefficient a(x) as a two-column CSV file");
    a->excludes(at);
    auto* f = cmd.add_option("--f", raw.f_expr, "right-hand side f(x) as an expression");
    auto* ft = cmd.add_option("--f-table", raw.f_table, "right-hand side f(x) as a two-column CSV file");
    f->excludes(ft);
    cmd.add_option("--x1", config.x1, "right end of the interval [0, x1]")->required();
    cmd.add_option("--alpha", config.alpha, "boundary value u(0)");
    cmd.add_option("--beta", config.beta, "boundary value u'(x1)");
    cmd.add_option("--n", config.n, "number of grid intervals")->capture_default_str();
    cmd.add_option("--tol", config.tol, "certified series tail tolerance")->capture_default_str();
    cmd.add_option("--format", raw.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd.add_option("--out", config.out_path, "output file (default: standard output)");
}

CoefficientSpec resolve(const std::string& expr, const std::string& table, const char* name) {
    if (!table.empty()) return CoefficientSpec(read_table_csv_file(table));
    if (expr.empty()) throw InvalidDomain(std::string("missing --") + name + " or --" + name + "-table");
    return CoefficientSpec(parse_expr(expr));
}

} // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Series solver for u'' + a(x) u = f(x) on [0, x1] with u(0) = alpha, u'(x1) = beta"};
    app.name(args.empty() ? "sbvp" : args.front());
    app.require_subcommand(1);

    RunConfig config;
    config.max_terms = max_terms_from_env();
    RawOptions raw;

    struct Sub {
        const char* name;
        const char* help;
        Command command;
    };
    const std::array<Sub, 3> subs{{
        {"solve", "solve the boundary value problem and report diagnostics", Command::Solve},
        {"fundamental", "emit I1, I2, F and their derivatives", Command::Fundamental},
        {"verify", "run every bound, identity and oracle check", Command::Verify},
    }};
    for (const Sub& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_options(*cmd, config, raw);
        cmd->callback([&config, c = s.command] { config.command = c; });
    }

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("sbvp");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kInputError;
    }

    try {
        config.a_spec = resolve(raw.a_expr, raw.a_table, "a");
        config.f_spec = resolve(raw.f_expr, raw.f_table, "f");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    config.format = raw.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    return run(config, out, err);
}

} // namespace sbvp::cli
