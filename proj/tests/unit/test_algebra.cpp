#include "lpa/algebra.hpp"
#include "lpa/errors.hpp"
#include "lpa/uniqueness.hpp"

#include "testkit.hpp"

#include <doctest.h>

using namespace lpa;
using testkit::algebra;
using testkit::ex;

namespace {

std::string nf(const AlgebraPtr& alg, const std::string& text) {
    return format(normal_form(ex(alg, text)));
}

// Evaluates the raw terms of x in a matrix system without any rewriting.
Matrix raw_image(const CKSystem& sys, const Element& x) {
    const TargetAlgebra& t = sys.target;
    Matrix out = t.zero();
    for (const auto& [m, c] : x.terms())
        out = t.add(out, t.scale(sys.embed(c), t.mul(path_image(sys, m.alpha),
                                                      t.star(path_image(sys, m.beta)))));
    return out;
}

// L(line_n) ~ M_n(Z) with v_i -> E_ii and a_i -> E_{i,i+1}.
CKSystem line_system(std::size_t n) {
    auto g = testkit::named_graph("line" + std::to_string(n));
    std::string text = "target: matrix " + std::to_string(n) + " over Z\n";
    auto unit = [&](std::size_t i, std::size_t j) {
        std::string m = "[";
        for (std::size_t r = 0; r < n; ++r) {
            m += r ? ",[" : "[";
            for (std::size_t c = 0; c < n; ++c)
                m += std::string(c ? "," : "") + (r == i && c == j ? "1" : "0");
            m += "]";
        }
        return m + "]";
    };
    for (std::size_t i = 0; i < n; ++i)
        text += "S " + g->vertex_name(i) + " = " + unit(i, i) + "\n";
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        text += "S " + g->edge_name(e) + " = " + unit(g->source(e), g->range(e)) + "\n";
    return parse_system(text, g);
}

} // namespace

TEST_SUITE("algebra") {

TEST_CASE("mono") {
    auto loop = algebra("loop");
    auto& g = loop->graph();
    CHECK(format(mono(loop, g.parse_path("v"), g.parse_path("v"))) == "v");
    CHECK(format(mono(loop, g.parse_path("c"), g.parse_path("v"))) == "c");

    auto lasso = algebra("lasso");
    auto& h = lasso->graph();
    CHECK(mono(lasso, h.parse_path("g"), h.parse_path("c")).size() == 1);
    CHECK(mono(lasso, h.parse_path("g"), h.parse_path("u")).has_no_terms());
}

TEST_CASE("products by the generator rule") {
    auto rose = algebra("rose2");
    CHECK(mul(ex(rose, "e.e*"), ex(rose, "f.f*")).has_no_terms());
    CHECK(format(mul(ex(algebra("loop"), "c*"), ex(algebra("loop"), "c"))) == "v");
    auto lasso = algebra("lasso");
    CHECK(format(mul(mul(ex(lasso, "g"), ex(lasso, "c.c*")), ex(lasso, "g*"))) == "g.c.c*.g*");
}

TEST_CASE("mixing algebras is an error") {
    CHECK_THROWS_AS(mul(ex(algebra("loop"), "v"), ex(algebra("loop", "Q"), "v")), DomainError);
    CHECK_THROWS_AS(ex(algebra("loop"), "v") + ex(algebra("rose2"), "v"), DomainError);
}

TEST_CASE("involution") {
    auto loop = algebra("loop");
    CHECK(format(star(ex(loop, "c"))) == "c*");
    CHECK(format(star(ex(loop, "v"))) == "v");
    auto rose = algebra("rose2");
    CHECK(format(star(ex(rose, "2*e.f*"))) == "2*f.e*");
}

TEST_CASE("normal forms") {
    CHECK(nf(algebra("rose2"), "e.e*") == "v - f.f*");
    CHECK(nf(algebra("loop"), "c.c*") == "v");
    CHECK(nf(algebra("line3"), "a.b.b*.a*") == "v1");
    auto rose_f = Algebra::create(testkit::named_graph("rose2"), Ring::integers(),
                                  SpecialEdgeChoice::parse(*testkit::named_graph("rose2"), "v=f"));
    CHECK(format(normal_form(parse_expr(rose_f, "f.f*"))) == "v - e.e*");
}

TEST_CASE("equality and zero") {
    auto rose = algebra("rose2");
    CHECK(eq(ex(rose, "v"), ex(rose, "e.e* + f.f*")));
    CHECK_FALSE(eq(ex(algebra("loop"), "c"), ex(algebra("loop"), "v")));
    CHECK(is_zero(mul(ex(rose, "e.f*"), ex(rose, "e.f*"))));
}

TEST_CASE("graded parts") {
    auto loop = algebra("loop");
    auto parts = graded_parts(ex(loop, "c + c*"));
    REQUIRE(parts.size() == 2);
    CHECK(format(parts.at(1)) == "c");
    CHECK(format(parts.at(-1)) == "c*");
    parts = graded_parts(ex(loop, "v"));
    REQUIRE(parts.size() == 1);
    CHECK(format(parts.at(0)) == "v");
    auto lasso = algebra("lasso");
    parts = graded_parts(ex(lasso, "g.c.g*"));
    REQUIRE(parts.size() == 1);
    CHECK(parts.count(1) == 1);
}

TEST_CASE("vertex expansion") {
    auto rose = algebra("rose2");
    CHECK(format(expand_vertex(rose, 0, 1)) == "e.e* + f.f*");
    auto sink = algebra("sink");
    CHECK(format(expand_vertex(sink, *sink->graph().find_vertex("u"), 2)) == "g.g*");
    auto line = algebra("line3");
    Element e = expand_vertex(line, *line->graph().find_vertex("v1"), 2);
    CHECK(format(e) == "a.b.b*.a*");
    CHECK(eq(e, ex(line, "v1")));
    for (const auto& name : testkit::six_graphs()) {
        auto alg = algebra(name);
        for (VertexId v = 0; v < alg->graph().vertex_count(); ++v)
            for (std::size_t k = 0; k <= 3; ++k)
                CHECK(eq(expand_vertex(alg, v, k), vertex(alg, v)));
    }
}

TEST_CASE("expression parser") {
    auto rose = algebra("rose2");
    Element x = ex(rose, "2*e.f* + v");
    CHECK(x.size() == 2);
    CHECK(format(x) == "v + 2*e.f*");
    auto loop = algebra("loop");
    CHECK(format(ex(loop, "c.c*")) == "c.c*");
    CHECK(format(normal_form(ex(loop, "c.c*"))) == "v");
    CHECK(format(ex(algebra("loop", "Laurent(Q)"), "(x - 1)*c + x^-1*v")) == "(x^-1)*v + (x - 1)*c");
}

TEST_CASE("expression parser errors and zero products") {
    auto rose = algebra("rose2");
    CHECK_THROWS_AS(ex(rose, "e.q"), ParseError);
    CHECK_THROWS_AS(ex(rose, "2*"), ParseError);
    CHECK_THROWS_AS(ex(rose, "e +"), ParseError);
    CHECK(ex(rose, "e*.f").has_no_terms());
    CHECK(ex(algebra("sink"), "g.g").has_no_terms());
    CHECK(format(ex(algebra("loop"), "c.c*")) == "c.c*");
}

TEST_CASE("basis sizes") {
    CHECK(basis_monomials(algebra("line3"), 2).size() == 9);
    auto loop = basis_monomials(algebra("loop"), 2);
    CHECK(loop.size() == 5);
    std::vector<std::string> sink;
    auto alg = algebra("sink");
    for (auto& m : basis_monomials(alg, 1))
        sink.push_back(format_monomial(alg->graph(), m));
    std::sort(sink.begin(), sink.end());
    CHECK(sink == std::vector<std::string>{"g", "g*", "u", "w"});
    for (int n = 2; n <= 4; ++n)
        CHECK(basis_monomials(algebra("line" + std::to_string(n)), n).size() ==
              static_cast<std::size_t>(n * n));
}

TEST_CASE("coefficient faithfulness over Z/4") {
    auto alg = algebra("loop", "Z/4");
    CHECK_FALSE(is_zero(ex(alg, "2*v")));
    CHECK(is_zero(ex(alg, "4*v")));
    CHECK(is_zero(mul(ex(alg, "2*v"), ex(alg, "2*c"))));
}

TEST_CASE("rewrite strategies agree and normal forms are canonical") {
    testkit::Rng rng(17);
    for (const auto& name : testkit::six_graphs()) {
        auto alg = algebra(name);
        for (int i = 0; i < 60; ++i) {
            Element x = testkit::random_element(alg, rng, 4, 3);
            Element a = normal_form(x, RewriteStrategy::Recursive);
            Element b = normal_form(x, RewriteStrategy::Worklist);
            CHECK(a.terms() == b.terms());
            CHECK(a.is_canonical());
            CHECK(normal_form(a).terms() == a.terms());
        }
    }
}

TEST_CASE("ring laws, involution and grading on random elements") {
    testkit::Rng rng(23);
    for (const auto& name : testkit::six_graphs()) {
        auto alg = algebra(name);
        for (int i = 0; i < 25; ++i) {
            Element x = testkit::random_element(alg, rng, 3, 2);
            Element y = testkit::random_element(alg, rng, 3, 2);
            Element z = testkit::random_element(alg, rng, 3, 2);
            CHECK(eq(mul(mul(x, y), z), mul(x, mul(y, z))));
            CHECK(eq(mul(x, y + z), mul(x, y) + mul(x, z)));
            CHECK(eq(mul(x + y, z), mul(x, z) + mul(y, z)));
            CHECK(eq(star(mul(x, y)), mul(star(y), star(x))));
            CHECK(star(star(x)).terms() == x.terms());
            CHECK(eq(mul(unit(alg), x), x));

            auto px = graded_parts(x), py = graded_parts(y), pxy = graded_parts(mul(x, y));
            std::map<int, Element> expected;
            for (auto& [i1, a] : px)
                for (auto& [j1, b] : py) {
                    auto [it, _] = expected.try_emplace(i1 + j1, zero(alg));
                    it->second += mul(a, b);
                }
            for (auto& [n, part] : expected) {
                Element actual = pxy.count(n) ? pxy.at(n) : zero(alg);
                CHECK(eq(actual, part));
            }
            Element sum = zero(alg);
            for (auto& [n, part] : px)
                sum += part;
            CHECK(sum.terms() == x.terms());
        }
    }
}

TEST_CASE("normal form agrees with a faithful matrix model") {
    // M_n(Z) for line graphs, Z[x,x^-1] for the loop.
    testkit::Rng rng(29);
    std::vector<CKSystem> systems;
    for (std::size_t n = 2; n <= 4; ++n)
        systems.push_back(line_system(n));
    systems.push_back(parse_system("target: matrix 1 over Laurent(Z)\nring: Z\nS v = [[1]]\nS c = [[x]]",
                                   testkit::named_graph("loop")));
    for (const auto& sys : systems) {
        auto alg = sys.algebra();
        for (int i = 0; i < 80; ++i) {
            Element x = testkit::random_element(alg, rng, 4, 3);
            Element n = normal_form(x);
            CHECK(raw_image(sys, x) == raw_image(sys, n));
            CHECK(is_zero(x) == sys.target.is_zero(raw_image(sys, x)));
        }
    }
}

TEST_CASE("printed normal forms re-parse to equal elements") {
    testkit::Rng rng(31);
    for (const auto& ring : {"Z", "Q", "Z/4", "Laurent(Q)"})
        for (const auto& name : testkit::six_graphs()) {
            auto alg = algebra(name, ring);
            for (int i = 0; i < 20; ++i) {
                Element x = testkit::random_element(alg, rng, 4, 3);
                if (alg->ring().is_laurent())
                    x = x.scaled(testkit::random_scalar(alg->ring(), rng));
                Element n = normal_form(x);
                CHECK(eq(ex(alg, format(n)), x));
                CHECK(eq(ex(alg, format(x)), x));
            }
        }
}

}
