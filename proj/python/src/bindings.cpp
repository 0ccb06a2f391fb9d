#include "lpa/aprep.hpp"
#include "lpa/cli.hpp"
#include "lpa/core.hpp"
#include "lpa/errors.hpp"
#include "lpa/uniqueness.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace lpa;

namespace {

// pybind11 holders cannot point to const objects, so graphs and algebras
// travel inside these thin handles.
struct PyGraph {
    GraphPtr g;
};

struct PyAlgebra {
    AlgebraPtr a;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

VertexId vertex_id(const Graph& g, const std::string& name) {
    auto v = g.find_vertex(name);
    if (!v)
        throw ParseError("unknown vertex '" + name + "'");
    return *v;
}

py::dict report_dict(const CKSystem& sys, const UniquenessReport& r) {
    const Graph& g = *sys.graph;
    Ring lr = omega_ring(sys.coeff_ring);
    py::dict a;
    a["pass"] = r.a.pass;
    a["exhaustive"] = r.a.exhaustive;
    a["samples"] = r.a.samples;
    if (r.a.witness)
        a["witness"] = py::make_tuple(g.vertex_name(r.a.witness->first),
                                      sys.coeff_ring.format(r.a.witness->second));
    py::list b;
    for (const auto& c : r.b) {
        py::dict d;
        d["alpha"] = g.format_path(c.alpha);
        d["pass"] = c.pass;
        d["bound"] = c.bound;
        if (c.annihilator)
            d["annihilator"] = lr.format(*c.annihilator);
        b.append(d);
    }
    py::dict out;
    out["verdict"] = to_string(r.verdict);
    out["condition_a"] = a;
    out["condition_b"] = b;
    out["condition_L"] = r.condition_L;
    out["graded"] = r.graded;
    out["reason"] = r.reason;
    return out;
}

} // namespace

PYBIND11_MODULE(_lpa, m) {
    m.doc() = "Exact arithmetic in Leavitt and Cohn path algebras of finite graphs";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UndecidedError>(m, "UndecidedError", PyExc_RuntimeError);

    py::class_<PyGraph>(m, "Graph")
        .def_static("parse", [](const std::string& text) {
            return PyGraph{std::make_shared<const Graph>(parse_graph(text))};
        })
        .def_static("load", [](const std::string& path) {
            return PyGraph{std::make_shared<const Graph>(parse_graph(slurp(path)))};
        })
        .def_property_readonly("vertices", [](const PyGraph& self) {
            std::vector<std::string> out;
            for (VertexId v = 0; v < self.g->vertex_count(); ++v)
                out.push_back(self.g->vertex_name(v));
            return out;
        })
        .def_property_readonly("edges", [](const PyGraph& self) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            const Graph& g = *self.g;
            for (EdgeId e = 0; e < g.edge_count(); ++e)
                out.emplace_back(g.edge_name(e), g.vertex_name(g.source(e)),
                                 g.vertex_name(g.range(e)));
            return out;
        })
        .def("condition_L", [](const PyGraph& self) { return condition_L(*self.g); })
        .def("build_F", [](const PyGraph& self) {
            return PyGraph{std::make_shared<const Graph>(build_F(*self.g))};
        })
        .def("is_commutative", [](const PyGraph& self) { return shape_classify(*self.g).commutative; })
        .def("distinguished_paths", [](const PyGraph& self, std::size_t max_len) {
            std::vector<std::pair<std::string, std::string>> out;
            for (auto& d : distinguished_paths(*self.g, max_len))
                out.emplace_back(self.g->format_path(d.alpha), self.g->format_path(d.lambda));
            return out;
        })
        .def("find_trail", [](const PyGraph& self, const std::string& v) {
            return format_trail(*self.g, find_trail_from(self.g, vertex_id(*self.g, v)));
        })
        .def("classify_trail", [](const PyGraph& self, const std::string& literal) {
            return to_string(classify(*self.g, parse_trail(self.g, literal)));
        })
        .def("discrete_trails", [](const PyGraph& self, std::size_t max_head_len) {
            std::vector<std::string> out;
            for (auto& t : enumerate_discrete(*self.g, max_head_len))
                out.push_back(format_trail(*self.g, t));
            return out;
        })
        .def("__str__", [](const PyGraph& self) { return format_graph(*self.g); });

    py::class_<Element>(m, "Element")
        .def("__add__", [](const Element& a, const Element& b) { return a + b; })
        .def("__sub__", [](const Element& a, const Element& b) { return a - b; })
        .def("__mul__", [](const Element& a, const Element& b) { return mul(a, b); })
        .def("__neg__", [](const Element& a) { return -a; })
        .def("__eq__", [](const Element& a, const Element& b) { return eq(a, b); })
        .def("star", [](const Element& a) { return star(a); })
        .def("normal_form", [](const Element& a) { return normal_form(a); })
        .def("is_zero", [](const Element& a) { return is_zero(a); })
        .def("is_normal", [](const Element& a) { return is_normal(a); })
        .def("core_project", [](const Element& a) { return core_project(a); })
        .def("in_core", [](const Element& a) { return in_core(a); })
        .def("graded_parts", [](const Element& a) { return graded_parts(a); })
        .def("__str__", [](const Element& a) { return format(a); })
        .def("__repr__", [](const Element& a) { return "<Element " + format(a) + ">"; });

    py::class_<PyAlgebra>(m, "Algebra")
        .def(py::init([](const PyGraph& g, const std::string& ring, const std::string& special) {
                 Ring r = Ring::parse(ring);
                 if (special.empty())
                     return PyAlgebra{Algebra::create(g.g, r)};
                 return PyAlgebra{Algebra::create(g.g, r, SpecialEdgeChoice::parse(*g.g, special))};
             }),
             py::arg("graph"), py::arg("ring") = "Z", py::arg("special_edges") = "")
        .def("parse", [](const PyAlgebra& self, const std::string& text) {
            return parse_expr(self.a, text);
        })
        .def("__call__", [](const PyAlgebra& self, const std::string& text) {
            return parse_expr(self.a, text);
        })
        .def_property_readonly("ring", [](const PyAlgebra& self) { return self.a->ring().name(); })
        .def("basis", [](const PyAlgebra& self, std::size_t max_len) {
            std::vector<std::string> out;
            for (auto& mono : basis_monomials(self.a, max_len))
                out.push_back(format_monomial(self.a->graph(), mono));
            return out;
        })
        .def("expand_vertex", [](const PyAlgebra& self, const std::string& v, std::size_t k) {
            return expand_vertex(self.a, vertex_id(self.a->graph(), v), k);
        })
        .def("classify_generator", [](const PyAlgebra& self, const std::string& text) {
            Element x = parse_expr(self.a, text);
            if (x.size() != 1)
                throw DomainError("expected a single generator, got '" + text + "'");
            return to_string(classify_generator(self.a->graph(), x.terms().begin()->first));
        })
        .def("witness", [](const PyAlgebra& self, const Element& x, std::size_t max_len) {
            auto w = diagonal_commutant_witness(x, max_len);
            std::optional<std::string> alpha;
            if (w.alpha)
                alpha = self.a->graph().format_path(*w.alpha);
            return py::make_tuple(to_string(w.status), alpha);
        })
        .def("ap_apply", [](const PyAlgebra& self, const Element& x, const std::string& v) {
            return format_vector(pi_ap(x, parse_vector(self.a, v)));
        })
        .def("check_em_square", [](const PyAlgebra& self, const Element& x, const std::string& v) {
            return check_em_square(x, parse_vector(self.a, v));
        })
        .def("reduce", [](const PyAlgebra& self, const Element& x, std::size_t bound) {
            auto cert = reduce_search(x, bound);
            std::optional<std::string> out;
            if (cert)
                out = format_certificate(self.a->graph(), self.a->ring(), *cert);
            return out;
        }, py::arg("x"), py::arg("path_bound") = 6);

    py::class_<CKSystem>(m, "System")
        .def_static("load", [](const std::string& path, bool over_F) {
            std::filesystem::path p(path);
            return parse_system(slurp(path), p.parent_path(), over_F);
        }, py::arg("path"), py::arg("over_F") = false)
        .def_static("parse", [](const std::string& text, const PyGraph& g) {
            return parse_system(text, g.g);
        })
        .def_property_readonly("algebra", [](const CKSystem& s) { return PyAlgebra{s.algebra()}; })
        .def("violations", [](const CKSystem& s) { return ck_validate(s).violations; })
        .def("hom_apply", [](const CKSystem& s, const std::string& expr) {
            return s.target.format(hom_apply(s, parse_expr(s.algebra(), expr)));
        })
        .def("check", [](const CKSystem& s, int degree_bound) {
            return report_dict(s, check_conditions(s, degree_bound));
        }, py::arg("degree_bound") = 4)
        .def("cohn_check", [](const CKSystem& s, int degree_bound) {
            return report_dict(s, cohn_check(s, degree_bound));
        }, py::arg("degree_bound") = 4);

    m.def("run", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "Runs the command line with the given arguments; returns (status, stdout, stderr).");
}
