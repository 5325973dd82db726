#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "hamdual/bellman.hpp"
#include "hamdual/cli.hpp"
#include "hamdual/cube.hpp"
#include "hamdual/duality.hpp"
#include "hamdual/dyadic.hpp"
#include "hamdual/errors.hpp"
#include "hamdual/specfun.hpp"

namespace py = pybind11;
using namespace hamdual;

namespace {

py::tuple run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full{"hamdual"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bellman-function constants, dual transforms and cube/martingale checks";

    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<TruncationError>(m, "TruncationError", numerical.ptr());
    py::register_exception<ZeroNotFoundError>(m, "ZeroNotFoundError", numerical.ptr());
    py::register_exception<CoercivityError>(m, "CoercivityError", numerical.ptr());
    py::register_exception<ConvexityError>(m, "ConvexityError", numerical.ptr());
    py::register_exception<SaddleConvergenceError>(m, "SaddleConvergenceError", numerical.ptr());
    py::register_exception<SeamProximityError>(m, "SeamProximityError", PyExc_ValueError);

    // special functions
    m.def("eval_n", [](double alpha, double x) {
        const specfun::NValue v = specfun::eval_n(alpha, x);
        return py::make_tuple(v.value, v.d1, v.d2);
    }, py::arg("alpha"), py::arg("x"), "(N, N', N'') at x");
    m.def("smallest_zero", [](double alpha) { return specfun::smallest_zero(alpha); }, py::arg("alpha"));
    m.def("hermite_poly", &specfun::hermite_poly, py::arg("m"), py::arg("x"));
    m.def("gamma_fn", &specfun::gamma_fn, py::arg("x"));
    m.def("solve_p0", &specfun::solve_p0, py::arg("tol") = 1e-13);

    py::class_<bellman::AlphaContext>(m, "AlphaContext")
        .def(py::init([](double alpha) { return bellman::make_context(alpha); }), py::arg("alpha"))
        .def_readonly("alpha", &bellman::AlphaContext::alpha)
        .def_readonly("beta", &bellman::AlphaContext::beta)
        .def_readonly("s", &bellman::AlphaContext::s)
        .def_readonly("c_norm", &bellman::AlphaContext::c_norm)
        .def("__repr__", [](const bellman::AlphaContext& c) {
            return "AlphaContext(alpha=" + cli::format_param(c.alpha) + ", s=" + cli::format_double(c.s) + ")";
        });

    m.def("u_alpha", &bellman::u_alpha, py::arg("ctx"), py::arg("x"));
    m.def("U", &bellman::U, py::arg("ctx"), py::arg("p"), py::arg("q"));
    m.def("main_inequality_gap", &bellman::main_inequality_gap, py::arg("ctx"), py::arg("p"), py::arg("q"),
          py::arg("a"));
    m.def("obstacle_gap", &bellman::obstacle_gap, py::arg("ctx"), py::arg("p"), py::arg("q"));

    // duality
    m.def("dual_M", [](const bellman::AlphaContext& c, double x, double y) { return duality::dual_M(c, x, y); },
          py::arg("ctx"), py::arg("x"), py::arg("y"));
    m.def("dual_inequality_gap",
          [](const bellman::AlphaContext& c, double x, double y, double a, double b) {
              return duality::dual_inequality_gap(c, x, y, a, b);
          },
          py::arg("ctx"), py::arg("x"), py::arg("y"), py::arg("a"), py::arg("b"));
    m.def("poincare32_closed_form", &duality::poincare32_closed_form, py::arg("x"), py::arg("y"));
    m.def("poincare32_minimax", [](double x, double y) {
        const duality::P32Check c = duality::poincare32_check(x, y);
        return c.minimax;
    }, py::arg("x"), py::arg("y"));
    m.def("logsob_exp_gap", &duality::logsob_exp_gap, py::arg("a"));

    // cube
    py::class_<cube::CubeFunction>(m, "CubeFunction")
        .def(py::init<int, std::vector<double>>(), py::arg("n"), py::arg("values"))
        .def_static("dictator", &cube::CubeFunction::dictator, py::arg("n"), py::arg("j"))
        .def_static("coordinate_sum", &cube::CubeFunction::coordinate_sum, py::arg("n"))
        .def_property_readonly("dim", &cube::CubeFunction::dim)
        .def_property_readonly("values", [](const cube::CubeFunction& f) {
            return std::vector<double>(f.values().begin(), f.values().end());
        })
        .def("__len__", &cube::CubeFunction::size);
    m.def("random_function", &cube::random_function, py::arg("n"), py::arg("seed"));
    m.def("gradient_norm", &cube::gradient_norm, py::arg("f"));
    m.def("theorem1_gap", &cube::theorem1_gap, py::arg("f"), py::arg("p"), py::arg("s"));
    m.def("poincare_ratio", &cube::poincare_ratio, py::arg("f"), py::arg("p"));
    m.def("best_constant_search", [](int n, double p, int restarts, std::uint64_t seed) {
        cube::ConstantSearch r = [&] {
            py::gil_scoped_release release;
            return cube::best_constant_search(n, p, restarts, seed);
        }();
        return py::make_tuple(r.estimate, r.witness);
    }, py::arg("n"), py::arg("p"), py::arg("restarts") = 8, py::arg("seed") = 0);
    m.def("sigma_exhaustive", [](int n, double p) {
        const cube::SigmaResult r = cube::sigma_exhaustive(n, p);
        return py::make_tuple(r.sigma, r.argmin.mask());
    }, py::arg("n"), py::arg("p"), "(sigma, argmin membership mask)");

    // dyadic
    py::class_<dyadic::DyadicMartingale>(m, "DyadicMartingale")
        .def(py::init<int, std::vector<double>>(), py::arg("depth"), py::arg("leaves"))
        .def_property_readonly("depth", &dyadic::DyadicMartingale::depth)
        .def_property_readonly("mean", &dyadic::DyadicMartingale::mean)
        .def_property_readonly("square", &dyadic::DyadicMartingale::square)
        .def_property_readonly("levels", &dyadic::DyadicMartingale::levels);
    m.def("random_martingale", &dyadic::random_martingale, py::arg("depth"), py::arg("seed"), py::arg("mean") = 0.0);
    m.def("cww_gap", &dyadic::cww_gap, py::arg("g"));
    m.def("orthogonality_defect", &dyadic::orthogonality_defect, py::arg("g"));
    m.def("davis_ratio", [](const dyadic::DyadicMartingale& g, double p, double s_p) {
        const dyadic::DavisCheck d = dyadic::davis_ratio(g, p, s_p);
        return py::make_tuple(d.lhs, d.rhs, d.ok);
    }, py::arg("g"), py::arg("p"), py::arg("s_p"));

    m.def("run_cli", &run_cli, py::arg("args"), "Runs the command line tool; returns (exit_code, stdout, stderr).");
}
