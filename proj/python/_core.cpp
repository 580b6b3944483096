#include "curvecalc/funcalc.hpp"
#include "curvecalc/io.hpp"
#include "curvecalc/suites.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace curvecalc;

namespace {

LinearRelation relation_arg(const Mat& M) { return LinearRelation::from_matrix(M); }

CalculusContext context(const Mat& A, double tol, bool domain_check) {
    CalculusContext ctx(relation_arg(A));
    if (tol > 0.0) ctx.rule.tol = tol;
    ctx.domain_policy = domain_check;
    return ctx;
}

py::dict stats_dict(const QuadStats& st) {
    py::dict d;
    d["evals"] = st.evals;
    d["intervals"] = st.intervals;
    d["converged"] = st.converged;
    d["err_est"] = st.err_est;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Functional calculus on Lipschitz curves";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    // ResolventFailure carries its node; translated by hand below.
    static py::exception<ResolventFailure> resolvent_failure(m, "ResolventFailure", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ResolventFailure& e) {
            py::object exc = resolvent_failure;
            py::object inst = exc(e.what());
            inst.attr("node") = py::cast(e.node());
            PyErr_SetObject(resolvent_failure.ptr(), inst.ptr());
        }
    });

    py::class_<LipschitzCurve>(m, "Curve")
        .def(py::init([](const std::vector<cplx>& pts) { return make_curve(pts); }), py::arg("points"))
        .def_property_readonly("length", &LipschitzCurve::length)
        .def_property_readonly("start", &LipschitzCurve::start)
        .def_property_readonly("end", &LipschitzCurve::end)
        .def("point", [](const LipschitzCurve& c, double t) { return c.point(t); })
        .def("distance", [](const LipschitzCurve& c, cplx z) { return c.distance(z); })
        .def("to_json", &io::curve_to_json);

    py::class_<NormalForm>(m, "NormalForm")
        .def("__call__", [](const NormalForm& nf, cplx z) { return nf.eval(z); }, py::arg("z"))
        .def_readonly("degree", &NormalForm::degree)
        .def_readonly("constant", &NormalForm::constant)
        .def("to_json", &io::normal_form_to_json)
        .def_static("from_json", [](const std::string& s) { return io::normal_form_from_json(s); });

    m.def("principal_power", [](cplx a) { return principal_power(a); }, py::arg("alpha"));
    m.def("principal_log", &principal_log);
    m.def("curve_power", &curve_power, py::arg("curve"), py::arg("alpha"));
    m.def("curve_log_power", &curve_log_power, py::arg("curve"), py::arg("n"));
    m.def("multiply", [](const NormalForm& f, const NormalForm& g) { return multiply(f, g); });

    m.def(
        "evaluate",
        [](const NormalForm& nf, const Mat& A, const Vec& u, double tol, bool domain_check) {
            CalculusContext ctx = context(A, tol, domain_check);
            QuadStats st;
            Vec r = evaluate(ctx, nf, u, &st);
            return py::make_tuple(r, stats_dict(st));
        },
        py::arg("nf"), py::arg("A"), py::arg("u"), py::arg("tol") = -1.0, py::arg("domain_check") = false,
        "f(A) u and quadrature statistics");
    m.def(
        "oracle",
        [](const Mat& A, const NormalForm& nf, const Vec& u) {
            return oracle(A, [&](cplx z) { return nf.eval(z); }, u);
        },
        py::arg("A"), py::arg("nf"), py::arg("u"), "V f(Lambda) V^-1 u for diagonalizable A");
    m.def(
        "resolvent",
        [](const Mat& A, cplx w, const Vec& u) { return relation_arg(A).resolvent_apply(w, u); },
        py::arg("A"), py::arg("w"), py::arg("u"));
    m.def(
        "principal_power_op",
        [](const Mat& A, cplx alpha, const Vec& u) { return principal_power_op(context(A, -1, false), alpha, u); },
        py::arg("A"), py::arg("alpha"), py::arg("u"));
    m.def(
        "curve_log_op",
        [](const Mat& A, const LipschitzCurve& c, const Vec& u) { return curve_log_op(context(A, -1, false), c, u); },
        py::arg("A"), py::arg("curve"), py::arg("u"));

    m.def("suite_names", &suite_names);
    m.def(
        "run_suite",
        [](const std::string& name, int n, std::uint64_t seed, double tol, bool negative_control) {
            SuiteOptions o;
            o.n = n;
            o.seed = seed;
            o.tol = tol;
            o.negative_control = negative_control;
            SuiteResult r = run_suite(name, o);
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict d;
                d["check"] = row.check;
                d["criterion"] = row.criterion;
                d["index"] = row.index;
                d["value"] = row.value;
                d["threshold"] = row.threshold;
                d["lower_bound"] = row.lower_bound;
                d["pass"] = row.pass;
                d["note"] = row.note;
                rows.append(d);
            }
            return py::make_tuple(r.pass(), rows);
        },
        py::arg("name"), py::arg("n") = -1, py::arg("seed") = 7, py::arg("tol") = -1.0,
        py::arg("negative_control") = false);
}
