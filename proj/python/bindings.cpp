// Thin string-in, string-out bindings; terms and formulas use the textual
// syntax, diagrams and derivations come back as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lineq/analysis.hpp"
#include "lineq/errors.hpp"
#include "lineq/parse.hpp"
#include "lineq/rewrite.hpp"

namespace py = pybind11;
using namespace lineq;

namespace {

std::pair<std::string, std::string> type_of(const std::string& term, const std::string& theory) {
    ArrowType t = infer_type(parse_arrow(term), Theory::from_name(theory));
    return {to_string(t.source), to_string(t.target)};
}

py::dict normalize(const std::string& term, const std::string& theory, const std::string& pass) {
    Theory th = Theory::from_name(theory);
    ArrowTerm f = parse_arrow(term);
    py::dict out;
    if (pass == "r") {
        RNormalForm rn = r_normal(f, th);
        out["f_r"] = print_arrow(rn.f_r);
        out["f_prime"] = print_arrow(rn.f_prime);
        out["result"] = print_arrow(rn.derivation.result());
        out["derivation"] = rn.derivation.to_json();
        return out;
    }
    NormalForm nf;
    if (pass == "develop")
        nf = develop(f, th);
    else if (pass == "ds")
        nf = delta_sigma_purge(f, th);
    else if (pass == "s")
        nf = s_normal(f, th);
    else
        throw py::value_error("pass must be develop, r, ds or s");
    out["result"] = print_arrow(nf.term);
    out["derivation"] = nf.derivation.to_json();
    return out;
}

} // namespace

PYBIND11_MODULE(_lineq, m) {
    static py::handle error = py::exception<Error>(m, "Error").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error(e.what());
            exc.attr("code") = e.code();
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def("theories", [] {
        std::vector<std::string> names;
        for (Theory th : Theory::all()) names.push_back(th.name());
        return names;
    });
    m.def("type_of", &type_of, py::arg("term"), py::arg("theory"), "(source, target) of a term");
    m.def("diagram", [](const std::string& term, const std::string& theory) {
        return diagram_json(eval(parse_arrow(term), Theory::from_name(theory)));
    }, py::arg("term"), py::arg("theory"), "Diagram of a term as JSON text");
    m.def("equal", [](const std::string& f, const std::string& g, const std::string& theory) {
        return decide_equal(parse_arrow(f), parse_arrow(g), Theory::from_name(theory));
    }, py::arg("f"), py::arg("g"), py::arg("theory"));
    m.def("same_generality", [](const std::string& f, const std::string& g, const std::string& theory) {
        return same_generality(parse_arrow(f), parse_arrow(g), Theory::from_name(theory));
    }, py::arg("f"), py::arg("g"), py::arg("theory"));
    m.def("diversify", [](const std::string& term, const std::string& theory) {
        return print_arrow(diversify(parse_arrow(term), Theory::from_name(theory)).term);
    }, py::arg("term"), py::arg("theory"));
    m.def("normalize", &normalize, py::arg("term"), py::arg("theory"), py::arg("pass_") = "develop");
}
