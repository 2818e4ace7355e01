#include "sbvp/bvp.hpp"
#include "sbvp/cli.hpp"
#include "sbvp/error.hpp"
#include "sbvp/oracle.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sbvp;

namespace {

py::array_t<double> to_array(std::span<const double> values) {
    return py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
}

using PyGrid = std::shared_ptr<Grid>;

PyGrid to_py(const GridPtr& g) { return std::const_pointer_cast<Grid>(g); }

CoefficientSpec to_spec(const py::object& source) {
    if (py::isinstance<py::str>(source)) return CoefficientSpec(parse_expr(source.cast<std::string>()));
    if (py::isinstance<Expr>(source)) return CoefficientSpec(source.cast<Expr>());
    if (py::isinstance<Table>(source)) return CoefficientSpec(source.cast<Table>());
    throw py::type_error("coefficient must be an expression string, Expr or Table");
}

} // namespace

PYBIND11_MODULE(_sbvp, m) {
    m.doc() = "Series solver for u'' + a(x) u = f(x), u(0) = alpha, u'(x1) = beta";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<UnknownFunction>(m, "UnknownFunction", base);
    py::register_exception<EvalError>(m, "EvalError", base);
    py::register_exception<InvalidDomain>(m, "InvalidDomain", base);
    py::register_exception<TableDomainError>(m, "TableDomainError", base);
    py::register_exception<GridMismatch>(m, "GridMismatch", base);
    py::register_exception<ContractionViolation>(m, "ContractionViolation", base);
    py::register_exception<MaxTermsExceeded>(m, "MaxTermsExceeded", base);
    py::register_exception<MissingF>(m, "MissingF", base);
    py::register_exception<SingularI2>(m, "SingularI2", base);
    py::register_exception<OracleSingular>(m, "OracleSingular", base);
    py::register_exception<Diverged>(m, "Diverged", base);

    py::class_<Expr>(m, "Expr")
        .def("__call__", &Expr::operator(), py::arg("x"))
        .def("__str__", &Expr::to_string)
        .def("__repr__", [](const Expr& e) { return "Expr('" + e.to_string() + "')"; })
        .def_property_readonly("depth", &Expr::depth);
    m.def("parse_expr", &parse_expr, py::arg("text"));
    m.def("eval_expr", &eval_expr, py::arg("expr"), py::arg("x"));

    py::class_<Table>(m, "Table")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("x"), py::arg("values"))
        .def("__call__", &Table::operator(), py::arg("x"));
    m.def("read_table_csv", &read_table_csv_file, py::arg("path"));

    py::class_<Grid, PyGrid>(m, "Grid")
        .def_property_readonly("x1", &Grid::x1)
        .def_property_readonly("n", &Grid::n)
        .def_property_readonly("h", &Grid::h)
        .def_property_readonly("nodes", [](const Grid& g) { return to_array(g.nodes()); });
    m.def("make_grid", [](double x1, int n) { return to_py(make_grid(x1, n)); }, py::arg("x1"),
          py::arg("n") = kDefaultIntervals);

    py::class_<SampledFn>(m, "SampledFn")
        .def(py::init([](const PyGrid& g, std::vector<double> v) { return SampledFn(g, std::move(v)); }), py::arg("grid"),
             py::arg("values"))
        .def_property_readonly("grid", [](const SampledFn& u) { return to_py(u.grid_ptr()); })
        .def_property_readonly("values", [](const SampledFn& u) { return to_array(u.values()); })
        .def("at", &SampledFn::at, py::arg("x"))
        .def("__len__", &SampledFn::size)
        .def("__getitem__", [](const SampledFn& u, std::size_t i) {
            if (i >= u.size()) throw py::index_error();
            return u[i];
        });
    m.def("sample", [](const py::object& source, const PyGrid& grid) { return sample(to_spec(source), grid); },
          py::arg("source"), py::arg("grid"));
    m.def("sup_norm", &sup_norm, py::arg("u"));
    m.def("cumulative_integral", &cumulative_integral, py::arg("u"));

    py::class_<ContractionCertificate>(m, "ContractionCertificate")
        .def_readonly("a_sup", &ContractionCertificate::a_sup)
        .def_readonly("x1", &ContractionCertificate::x1)
        .def_readonly("q", &ContractionCertificate::q)
        .def_readonly("margin", &ContractionCertificate::margin);
    m.def("contraction_ratio", &contraction_ratio, py::arg("a_sup"), py::arg("x1"));
    m.def("apply_B", &apply_B, py::arg("u"), py::arg("a"));
    m.def("apply_B_reference", &apply_B_reference, py::arg("u"), py::arg("a"));
    m.def("compute_g", &compute_g, py::arg("f"));

    py::class_<SeriesSolution>(m, "SeriesSolution")
        .def_readonly("a", &SeriesSolution::a)
        .def_readonly("f", &SeriesSolution::f)
        .def_readonly("g", &SeriesSolution::g)
        .def_readonly("I1", &SeriesSolution::I1)
        .def_readonly("I2", &SeriesSolution::I2)
        .def_readonly("F", &SeriesSolution::F)
        .def_readonly("dI1", &SeriesSolution::dI1)
        .def_readonly("dI2", &SeriesSolution::dI2)
        .def_readonly("dF", &SeriesSolution::dF)
        .def_property_readonly("terms", [](const SeriesSolution& s) {
            return py::dict(py::arg("I1") = s.terms_I1, py::arg("I2") = s.terms_I2, py::arg("F") = s.terms_F);
        })
        .def_property_readonly("tails", [](const SeriesSolution& s) {
            return py::dict(py::arg("I1") = s.tail_I1, py::arg("I2") = s.tail_I2, py::arg("F") = s.tail_F);
        })
        .def_readonly("certificate", &SeriesSolution::certificate);
    m.def(
        "fundamental_system",
        [](const SampledFn& a, const SampledFn& f, double tol, int max_terms) {
            py::gil_scoped_release release;
            return fundamental_system(a, f, SeriesOptions{tol, max_terms});
        },
        py::arg("a"), py::arg("f"), py::arg("tol") = kDefaultTolerance, py::arg("max_terms") = kDefaultMaxTerms);

    py::class_<BoundCheck>(m, "BoundCheck")
        .def_readonly("name", &BoundCheck::name)
        .def_readonly("value", &BoundCheck::value)
        .def_readonly("limit", &BoundCheck::limit)
        .def_readonly("passed", &BoundCheck::pass);
    m.def("bound_checks", &bound_checks, py::arg("sol"), py::arg("slack") = kBoundSlack);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("u", &SolveReport::u)
        .def_readonly("du", &SolveReport::du)
        .def_readonly("c1", &SolveReport::c1)
        .def_readonly("c2", &SolveReport::c2)
        .def_property_readonly("boundary_err",
                               [](const SolveReport& r) { return py::make_tuple(r.boundary_err_left, r.boundary_err_right); })
        .def_readonly("residual_max", &SolveReport::residual_max)
        .def_readonly("fixedpoint_err", &SolveReport::fixedpoint_err)
        .def_readonly("wronskian_dev", &SolveReport::wronskian_dev)
        .def_readonly("i2_at_x1", &SolveReport::i2_at_x1)
        .def_readonly("singular", &SolveReport::singular)
        .def_readonly("bound_checks", &SolveReport::bound_checks);
    m.def(
        "general_solution",
        [](const SeriesSolution& sol, double c1, double c2) {
            GeneralSolution gs = general_solution(sol, c1, c2);
            return py::make_tuple(gs.u, gs.du);
        },
        py::arg("sol"), py::arg("c1"), py::arg("c2"));
    m.def(
        "solve_problem_d",
        [](const SeriesSolution& sol, double alpha, double beta) { return solve_problem_d(sol, ProblemD{alpha, beta}); },
        py::arg("sol"), py::arg("alpha"), py::arg("beta"));
    m.def(
        "wronskian_check",
        [](const SeriesSolution& sol) {
            WronskianCheck w = wronskian_check(sol);
            return py::make_tuple(w.w, w.dev);
        },
        py::arg("sol"));

    py::class_<OracleFundamental>(m, "OracleFundamental")
        .def_readonly("I1", &OracleFundamental::I1)
        .def_readonly("I2", &OracleFundamental::I2)
        .def_readonly("F", &OracleFundamental::F)
        .def_readonly("dpsi_at_x1", &OracleFundamental::dpsi_at_x1)
        .def_readonly("wronskian", &OracleFundamental::wronskian);
    m.def(
        "oracle_fundamental",
        [](const SampledFn& a, const SampledFn& f) {
            py::gil_scoped_release release;
            return oracle_fundamental(a, f);
        },
        py::arg("a"), py::arg("f"));
    m.def("compare", py::overload_cast<const SeriesSolution&, const OracleFundamental&>(&compare), py::arg("series"),
          py::arg("oracle"));

    m.def(
        "cli_main",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            std::vector<std::string> argv{"sbvp"};
            argv.insert(argv.end(), args.begin(), args.end());
            const int code = cli::main(argv, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line interface in-process; returns (exit_code, stdout, stderr).");
}
