#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcode/bounds.hpp"
#include "qcode/canon.hpp"
#include "qcode/codedb.hpp"
#include "qcode/covrad.hpp"
#include "qcode/errors.hpp"
#include "qcode/extend.hpp"
#include "qcode/pipeline.hpp"

namespace py = pybind11;
using namespace qcode;

namespace {

LinearCode make_code(const std::vector<std::string>& rows, int q) {
    return LinearCode(GeneratorMatrix::from_rows(Field(q), rows));
}

std::vector<std::string> rows_of(const GeneratorMatrix& g) {
    std::vector<std::string> out;
    for (const auto& r : g.rows()) out.push_back(r.to_string());
    return out;
}

std::vector<std::vector<std::string>> rows_of(const CodeDB& db) {
    std::vector<std::vector<std::string>> out;
    for (const auto& g : db.codes) out.push_back(rows_of(g));
    return out;
}

py::dict db_dict(const CodeDB& db) {
    py::dict d;
    d["q"] = db.params.q;
    d["n"] = db.params.n;
    d["k"] = db.params.k;
    d["d"] = db.params.d;
    d["codes"] = rows_of(db);
    d["text"] = db.to_text();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Linear code classification core";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<InvariantError>(m, "InvariantError", base.ptr());

    py::class_<LinearCode>(m, "Code")
        .def(py::init(&make_code), py::arg("rows"), py::arg("q") = 5)
        .def_property_readonly("n", &LinearCode::n)
        .def_property_readonly("k", &LinearCode::k)
        .def_property_readonly("q", &LinearCode::q)
        .def_property_readonly("rows", [](const LinearCode& c) { return rows_of(c.generator()); })
        .def("min_weight", &LinearCode::min_weight)
        .def("weight_enumerator", &LinearCode::weight_enumerator)
        .def("shorten", [](const LinearCode& c, std::size_t j) { return shorten(c, j); })
        .def("puncture", [](const LinearCode& c, std::size_t j) { return puncture(c, j); })
        .def("__repr__", [](const LinearCode& c) {
            return "<Code [" + std::to_string(c.n()) + "," + std::to_string(c.k()) + "]_" + std::to_string(c.q()) + ">";
        });

    m.def("canonical_certificate", [](const LinearCode& c) { return canonize(c).cert.hex(); });
    m.def("equivalent", &equivalent);
    m.def(
        "covering_radius", [](const LinearCode& c) { return covering_radius(c); }, py::call_guard<py::gil_scoped_release>());
    m.def(
        "covers_at_least", [](const LinearCode& c, int t) { return covers_at_least(c, t); },
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "extend",
        [](const LinearCode& parent, int d) {
            py::gil_scoped_release release;
            return enumerate_children(ExtensionTask(parent, d));
        },
        py::arg("parent"), py::arg("d"), "One child per normalized extension row.");

    m.def("classify_k2", [](int q, int n, int d) { return db_dict(classify_k2(q, n, d)); });
    m.def("classify_k1", [](int q, int n, int d) { return db_dict(classify_k1(q, n, d)); });
    m.def("parse_db", [](const std::string& text) { return db_dict(CodeDB::parse(text)); });
    m.def("load_db", [](const std::string& path) { return db_dict(CodeDB::load(path)); });
    m.def("verify_db", [](const std::string& text) {
        const auto rep = verify_db_text(text);
        std::vector<std::string> problems;
        for (const auto& v : rep.violations) problems.push_back(v.what);
        return problems;
    });

    py::class_<DerivedBounds>(m, "DerivedBounds")
        .def("excluded", &DerivedBounds::excluded)
        .def("existing", &DerivedBounds::existing)
        .def("report", &DerivedBounds::report)
        .def_property_readonly("determined_d",
                               [](const DerivedBounds& b) {
                                   std::vector<std::tuple<int, int, int>> out;
                                   for (const auto& d : b.determined_d) out.emplace_back(d.n, d.k, d.d);
                                   return out;
                               })
        .def_property_readonly("determined_n",
                               [](const DerivedBounds& b) {
                                   std::vector<std::tuple<int, int, int>> out;
                                   for (const auto& d : b.determined_n) out.emplace_back(d.k, d.d, d.n);
                                   return out;
                               })
        .def_property_readonly("consequences", [](const DerivedBounds& b) {
            std::vector<std::tuple<int, int, int>> out;
            for (auto i : b.consequences) out.emplace_back(b.facts[i].params.n, b.facts[i].params.k, b.facts[i].params.d);
            return out;
        });

    m.def(
        "derive_bounds",
        [](const std::string& config_text) {
            const auto cfg = BoundsConfig::parse(config_text);
            return derive_bounds(cfg.axioms, cfg.window);
        },
        py::arg("config_text"), "Closes the axioms of a bounds file under puncturing, shortening and residuals.");
}
