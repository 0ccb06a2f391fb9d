#include "lpa/core.hpp"
#include "lpa/errors.hpp"
#include "lpa/uniqueness.hpp"

#include "testkit.hpp"

#include <doctest.h>

using namespace lpa;
using testkit::algebra;
using testkit::ex;
using testkit::named_graph;

namespace {

CKSystem sys(const std::string& graph, const std::string& text) {
    return parse_system(text, named_graph(graph));
}

const char* kLoopZ = "target: matrix 1 over Z\nS v = [[1]]\nS c = [[1]]";
const char* kLoopLaurent = "target: matrix 1 over Laurent(Q)\nS v = [[1]]\nS c = [[x]]";
const char* kLoopMod4 = "ring: Z/4\ntarget: matrix 1 over Laurent(Z/2)\nS v = [[1]]\nS c = [[x]]";
const char* kLoopSwap = "target: matrix 2 over Z\nS v = [[1,0],[0,1]]\nS c = [[0,1],[1,0]]";
const char* kExitDropW = "target: matrix 1 over Z\nS v = [[1]]\nS c = [[1]]";

// p(W) for p with nonnegative exponents, computed by Horner-free powers.
Matrix evaluate(const CKSystem& s, const Ring& lr, const Scalar& p, const Matrix& u,
                const Matrix& w) {
    const TargetAlgebra& t = s.target;
    Matrix out = t.zero();
    for (auto [k, c] : lr.coefficients(p)) {
        REQUIRE(k >= 0);
        Matrix power = u;
        for (int i = 0; i < k; ++i)
            power = t.mul(power, w);
        out = t.add(out, t.scale(s.embed(s.coeff_ring.from_rational(c)), power));
    }
    return out;
}

void check_annihilators(const CKSystem& s, const UniquenessReport& r) {
    auto alg = s.algebra();
    Ring lr = omega_ring(s.coeff_ring);
    for (const auto& b : r.b) {
        if (b.pass)
            continue;
        REQUIRE(b.annihilator);
        CHECK_FALSE(lr.is_zero(*b.annihilator));
        Matrix u = hom_apply(s, omega(alg, b.alpha, 0));
        Matrix w = hom_apply(s, omega(alg, b.alpha, 1));
        CHECK(s.target.is_zero(evaluate(s, lr, *b.annihilator, u, w)));
    }
}

} // namespace

TEST_SUITE("uniqueness") {

TEST_CASE("target involution is an anti-automorphism of order two") {
    testkit::Rng rng(1);
    for (const char* ring : {"Z", "Laurent(Q)", "Z/6"}) {
        TargetAlgebra t(Ring::parse(ring), 2);
        auto rnd = [&] {
            Matrix m = t.zero();
            for (auto& e : m.entries)
                e = testkit::random_scalar(t.ring(), rng);
            return m;
        };
        for (int i = 0; i < 30; ++i) {
            Matrix a = rnd(), b = rnd();
            CHECK(t.star(t.star(a)) == a);
            CHECK(t.star(t.mul(a, b)) == t.mul(t.star(b), t.star(a)));
            CHECK(t.star(t.add(a, b)) == t.add(t.star(a), t.star(b)));
        }
    }
}

TEST_CASE("matrix literals") {
    TargetAlgebra t(Ring::parse("Laurent(Q)"), 2);
    Matrix m = t.parse("[[1, x], [0, x^-1 + 2]]");
    CHECK(t.parse(t.format(m)) == m);
    CHECK_THROWS_AS(t.parse("[[1,0]]"), ParseError);
    CHECK_THROWS_AS(t.parse("[[1,0],[0,1],[0,0]]"), ParseError);
    CHECK_THROWS_AS(t.parse("[[1,0],[0,y]]"), ParseError);
}

TEST_CASE("ring maps") {
    Ring z = Ring::integers(), q = Ring::rationals();
    CHECK(ring_maps_into(z, q));
    CHECK(ring_maps_into(z, Ring::parse("Laurent(Z/3)")));
    CHECK(ring_maps_into(Ring::parse("Z/4"), Ring::parse("Z/2")));
    CHECK_FALSE(ring_maps_into(Ring::parse("Z/2"), Ring::parse("Z/4")));
    CHECK_FALSE(ring_maps_into(q, z));
    CHECK(ring_maps_into(q, Ring::parse("Laurent(Q)")));
    // reported against the `ring:` line of the file
    CHECK_THROWS_AS(sys("loop", "ring: Q\ntarget: matrix 1 over Z\nS v = [[1]]"), ParseError);
    CHECK_THROWS_AS(sys("loop", "ring: Laurent(Q)\ntarget: matrix 1 over Laurent(Q)"), ParseError);
    CKSystem s = sys("loop", kLoopZ);
    CHECK_THROWS_AS(set_coeff_ring(s, Ring::rationals()), DomainError);
}

TEST_CASE("system files") {
    CHECK_THROWS_AS(sys("loop", "target: matrix 1 over Z\nS q = [[1]]"), ParseError);
    CHECK_THROWS_AS(sys("loop", "S v = [[1]]"), ParseError);
    CHECK_THROWS_AS(sys("loop", "target: matrix 2 over Z\nS v = [[1]]"), ParseError);
    CHECK_THROWS_AS(sys("loop", "target: matrix 1 over Z\nS v = [[1]]\nS v = [[1]]"), ParseError);
    // unassigned generators are zero
    CKSystem s = sys("loop", "target: matrix 1 over Z\nS v = [[1]]");
    CHECK(s.target.is_zero(s.edge_images[0]));
    CHECK(s.coeff_ring == Ring::integers());
    CHECK(sys("loop", kLoopLaurent).coeff_ring == Ring::rationals());
}

TEST_CASE("relation checks") {
    CHECK(ck_validate(sys("loop", kLoopLaurent)).valid);
    CHECK(ck_validate(sys("loop", kLoopZ)).valid);
    auto bad = ck_validate(sys("rose2", "target: matrix 1 over Z\nS v = [[1]]\nS e = [[1]]\nS f = [[1]]"));
    CHECK_FALSE(bad.valid);
    bool saw = false;
    for (auto& v : bad.violations)
        saw = saw || v.starts_with("(4) S_e^* S_f");
    CHECK(saw);
    // a projection that is not self-adjoint fails (1)-(2)
    auto nonsa = ck_validate(sys("loop", "target: matrix 2 over Z\nS v = [[1,1],[0,0]]\nS c = [[1,1],[0,0]]"));
    CHECK_FALSE(nonsa.valid);
}

TEST_CASE("induced homomorphism") {
    CKSystem lau = sys("loop", kLoopLaurent);
    CHECK(lau.target.format(hom_apply(lau, ex(lau.algebra(), "c + c*"))) == "[[x + x^-1]]");
    CKSystem z = sys("loop", kLoopZ);
    CHECK(z.target.is_zero(hom_apply(z, ex(z.algebra(), "c - v"))));
    CHECK_THROWS_AS(hom_apply(sys("rose2", "target: matrix 1 over Z\nS v = [[1]]\nS e = [[1]]\nS f = [[1]]"),
                              ex(algebra("rose2"), "v")),
                    DomainError);
    CHECK_THROWS_AS(hom_apply(z, ex(algebra("loop", "Q"), "v")), DomainError);
}

TEST_CASE("homomorphism laws on samples") {
    testkit::Rng rng(2);
    std::vector<CKSystem> systems{sys("loop", kLoopLaurent), sys("loop", kLoopSwap),
                                  sys("exit", kExitDropW),
                                  sys("lasso", "target: matrix 2 over Laurent(Z)\nS u = [[1,0],[0,0]]\n"
                                               "S v = [[0,0],[0,1]]\nS g = [[0,1],[0,0]]\nS c = [[0,0],[0,x]]")};
    for (const auto& s : systems) {
        REQUIRE(ck_validate(s).valid);
        auto alg = s.algebra();
        const TargetAlgebra& t = s.target;
        Matrix sum = t.zero();
        for (VertexId v = 0; v < alg->graph().vertex_count(); ++v)
            sum = t.add(sum, hom_apply(s, vertex(alg, v)));
        CHECK(sum == t.identity());
        for (int i = 0; i < 30; ++i) {
            Element x = testkit::random_element(alg, rng, 3, 2);
            Element y = testkit::random_element(alg, rng, 3, 2);
            CHECK(hom_apply(s, mul(x, y)) == t.mul(hom_apply(s, x), hom_apply(s, y)));
            CHECK(hom_apply(s, x + y) == t.add(hom_apply(s, x), hom_apply(s, y)));
            CHECK(hom_apply(s, star(x)) == t.star(hom_apply(s, x)));
        }
    }
}

TEST_CASE("reduction certificates") {
    auto rose = algebra("rose2");
    auto c = reduce_search(ex(rose, "e.e*"), 6);
    REQUIRE(c);
    CHECK(format_certificate(rose->graph(), rose->ring(), *c) == "mu=e nu=e scalar-vertex r=1 v=v");
    CHECK(replay(*c, ex(rose, "e.e*")));

    auto loop = algebra("loop");
    c = reduce_search(ex(loop, "c + c.c"), 6);
    REQUIRE(c);
    CHECK(c->kind == ReductionCertificate::Kind::CyclePolynomial);
    CHECK(format_certificate(loop->graph(), loop->ring(), *c) ==
          "mu=v nu=v cycle-polynomial lambda=c p=x^2 + x");

    auto sink = algebra("sink");
    c = reduce_search(ex(sink, "2*u"), 6);
    REQUIRE(c);
    CHECK(format_certificate(sink->graph(), sink->ring(), *c) == "mu=u nu=u scalar-vertex r=2 v=u");

    CHECK_THROWS_AS(reduce_search(ex(rose, "e.f* - e.f*"), 6), DomainError);
}

TEST_CASE("certificates replay and reject tampering") {
    testkit::Rng rng(3);
    for (const auto& name : testkit::six_graphs()) {
        auto alg = algebra(name);
        for (int i = 0; i < 15; ++i) {
            Element a = testkit::random_element(alg, rng, 3, 2);
            if (is_zero(a))
                continue;
            auto c = reduce_search(a, 6);
            REQUIRE(c);
            CHECK(replay(*c, a));
            CHECK_FALSE(replay(*c, a + a + a));
        }
    }
}

TEST_CASE("condition (b) fails for the trivial loop system") {
    CKSystem s = sys("loop", kLoopZ);
    auto r = check_conditions(s, 4);
    CHECK(r.verdict == UniquenessReport::Verdict::NotInjective);
    REQUIRE(r.b.size() == 1);
    CHECK_FALSE(r.b[0].pass);
    CHECK(omega_ring(s.coeff_ring).format(*r.b[0].annihilator) == "x - 1");
    CHECK(r.a.pass);
    check_annihilators(s, r);
}

TEST_CASE("the Laurent loop system passes at every bound") {
    CKSystem s = sys("loop", kLoopLaurent);
    for (int bound = 0; bound <= 8; ++bound) {
        auto r = check_conditions(s, bound);
        CHECK(r.a.pass);
        REQUIRE(r.b.size() == 1);
        CHECK(r.b[0].pass);
        CHECK(r.b[0].bound == bound);
        CHECK(r.graded);
        CHECK(r.verdict == UniquenessReport::Verdict::VerifiedAtBound);
    }
}

TEST_CASE("graded Laurent system has no small kernel") {
    CKSystem s = sys("loop", kLoopLaurent);
    auto alg = s.algebra();
    testkit::Rng rng(4);
    for (const auto& m : basis_monomials(alg, 3))
        CHECK_FALSE(s.target.is_zero(hom_apply(s, mono(alg, m))));
    for (int i = 0; i < 100; ++i) {
        Element x = testkit::random_element(alg, rng, 4, 3);
        CHECK(is_zero(x) == s.target.is_zero(hom_apply(s, x)));
    }
}

TEST_CASE("condition (a) fails when 2v maps to zero over Z/4") {
    CKSystem s = parse_system(kLoopMod4, named_graph("loop"));
    auto r = check_conditions(s, 4);
    CHECK_FALSE(r.a.pass);
    CHECK(r.a.exhaustive);
    REQUIRE(r.a.witness);
    CHECK(s.coeff_ring.format(r.a.witness->second) == "2");
    CHECK(r.verdict == UniquenessReport::Verdict::NotInjective);
    CHECK_FALSE(is_zero(ex(s.algebra(), "2*v")));
    check_annihilators(s, r);
}

TEST_CASE("Condition (L) graph with a vanishing vertex") {
    CKSystem s = sys("exit", kExitDropW);
    REQUIRE(ck_validate(s).valid);
    auto r = check_conditions(s, 4);
    CHECK(r.condition_L);
    CHECK(r.b.empty());
    CHECK_FALSE(r.a.pass);
    CHECK(r.verdict == UniquenessReport::Verdict::NotInjective);
}

TEST_CASE("Condition (L) over a finite ring earns an exact verdict") {
    // L(line2) ~ M_2(Z/3), and the identity representation is faithful
    CKSystem s = parse_system("ring: Z/3\ntarget: matrix 2 over Z/3\nS v1 = [[1,0],[0,0]]\n"
                              "S v2 = [[0,0],[0,1]]\nS a1 = [[0,1],[0,0]]",
                              named_graph("line2"));
    auto r = check_conditions(s, 4);
    CHECK(r.a.exhaustive);
    CHECK(r.verdict == UniquenessReport::Verdict::Injective);
}

TEST_CASE("permutation loop system has annihilator x^2 - 1") {
    CKSystem s = sys("loop", kLoopSwap);
    auto r = check_conditions(s, 4);
    REQUIRE(r.b.size() == 1);
    CHECK_FALSE(r.b[0].pass);
    CHECK(omega_ring(s.coeff_ring).format(*r.b[0].annihilator) == "x^2 - 1");
    check_annihilators(s, r);
    // the kernel element c^2 - v reduces to a core element in the kernel too
    auto alg = s.algebra();
    Element k = ex(alg, "c.c - v");
    CHECK(s.target.is_zero(hom_apply(s, k)));
    auto cert = reduce_search(k, 6);
    REQUIRE(cert);
    Element core = certificate_outcome(alg, *cert);
    CHECK(in_core(core));
    CHECK(s.target.is_zero(hom_apply(s, core)));
}

TEST_CASE("annihilators over Z/q") {
    for (const char* text : {"ring: Z/4\ntarget: matrix 1 over Z/4\nS v = [[1]]\nS c = [[3]]",
                             "ring: Z/6\ntarget: matrix 2 over Z/6\nS v = [[1,0],[0,1]]\nS c = [[0,1],[1,0]]",
                             "ring: Z/4\ntarget: matrix 2 over Z/2\nS v = [[1,0],[0,1]]\nS c = [[1,0],[0,1]]"}) {
        CKSystem s = sys("loop", text);
        REQUIRE(ck_validate(s).valid);
        auto r = check_conditions(s, 3);
        REQUIRE(r.b.size() == 1);
        CHECK_FALSE(r.b[0].pass);
        check_annihilators(s, r);
    }
}

TEST_CASE("kernel witnesses imply core kernel witnesses") {
    testkit::Rng rng(6);
    std::vector<CKSystem> systems{sys("loop", kLoopZ), sys("loop", kLoopSwap), sys("exit", kExitDropW)};
    for (const auto& s : systems) {
        auto alg = s.algebra();
        int found = 0;
        for (int i = 0; i < 200 && found < 10; ++i) {
            Element x = testkit::random_element(alg, rng, 3, 2);
            if (is_zero(x) || !s.target.is_zero(hom_apply(s, x)))
                continue;
            ++found;
            auto cert = reduce_search(x, 6);
            REQUIRE(cert);
            Element core = certificate_outcome(alg, *cert);
            CHECK(in_core(core));
            CHECK_FALSE(is_zero(core));
            CHECK(s.target.is_zero(hom_apply(s, core)));
        }
        CHECK(found > 0);
    }
}

TEST_CASE("Cohn embedding") {
    auto loop = algebra("loop");
    auto f = cohn_algebra(loop);
    CHECK(format(cohn_embed(ex(loop, "v"), f)) == "v + v'");
    CHECK(eq(cohn_embed(mul(ex(loop, "c*"), ex(loop, "c")), f), cohn_embed(ex(loop, "v"), f)));
    Element cv = cohn_embed(ex(loop, "v"), f);
    CHECK(eq(mul(cv, cv), cv));
}

TEST_CASE("Cohn embedding respects the Cohn relations") {
    testkit::Rng rng(7);
    for (const auto& name : testkit::six_graphs()) {
        auto alg = algebra(name);
        auto f = cohn_algebra(alg);
        const Graph& g = alg->graph();
        auto phi = [&](const Element& x) { return cohn_embed(x, f); };
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            for (VertexId w = 0; w < g.vertex_count(); ++w)
                CHECK(eq(mul(phi(vertex(alg, v)), phi(vertex(alg, w))),
                         v == w ? phi(vertex(alg, v)) : zero(f)));
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            Element pe = phi(edge(alg, e));
            CHECK(eq(mul(phi(vertex(alg, g.source(e))), pe), pe));
            CHECK(eq(mul(pe, phi(vertex(alg, g.range(e)))), pe));
            CHECK(eq(phi(ghost(alg, e)), star(pe)));
            for (EdgeId d = 0; d < g.edge_count(); ++d)
                CHECK(eq(mul(phi(ghost(alg, e)), phi(edge(alg, d))),
                         e == d ? phi(vertex(alg, g.range(e))) : zero(f)));
        }
        for (int i = 0; i < 20; ++i) {
            Element x = testkit::random_element(alg, rng, 2, 3);
            Element y = testkit::random_element(alg, rng, 2, 3);
            CHECK(eq(phi(mul(x, y)), mul(phi(x), phi(y))));
        }
    }
}

TEST_CASE("Cohn CK-2 fails in the embedding") {
    // v - ee* - ff* is nonzero in the Cohn algebra
    auto rose = algebra("rose2");
    auto f = cohn_algebra(rose);
    Element x = zero(rose);
    x.add_term(Monomial{rose->graph().parse_path("v"), rose->graph().parse_path("v")}, rose->ring().one());
    x.add_term(Monomial{rose->graph().parse_path("e"), rose->graph().parse_path("e")}, rose->ring().from_int(-1));
    x.add_term(Monomial{rose->graph().parse_path("f"), rose->graph().parse_path("f")}, rose->ring().from_int(-1));
    CHECK_FALSE(is_zero(cohn_embed(x, f)));
    CHECK(is_zero(x));
}

TEST_CASE("Cohn uniqueness checks") {
    auto f_sink = std::make_shared<const Graph>(build_F(*named_graph("sink")));
    CKSystem good = parse_system("target: matrix 3 over Z\nS u = [[1,0,0],[0,0,0],[0,0,0]]\n"
                                 "S w = [[0,0,0],[0,1,0],[0,0,0]]\nS g = [[0,1,0],[0,0,0],[0,0,0]]\n"
                                 "S u' = [[0,0,0],[0,0,0],[0,0,1]]",
                                 f_sink);
    auto r = cohn_check(good, 4);
    CHECK(r.condition_L);
    CHECK(r.b.empty());
    CHECK(r.a.pass);
    CHECK(r.verdict == UniquenessReport::Verdict::VerifiedAtBound);

    auto f_loop = std::make_shared<const Graph>(build_F(*named_graph("loop")));
    CKSystem lost = parse_system(kLoopLaurent, f_loop);
    r = cohn_check(lost, 4);
    CHECK_FALSE(r.a.pass);
    REQUIRE(r.a.witness);
    CHECK(f_loop->vertex_name(r.a.witness->first) == "v'");
}

TEST_CASE("Cohn commutativity means no edges") {
    testkit::Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        auto g = std::make_shared<const Graph>(testkit::random_graph(rng, 4));
        auto alg = testkit::algebra(g);
        auto f = cohn_algebra(alg);
        std::vector<Element> gens;
        for (VertexId v = 0; v < g->vertex_count(); ++v)
            gens.push_back(cohn_embed(vertex(alg, v), f));
        for (EdgeId e = 0; e < g->edge_count(); ++e) {
            gens.push_back(cohn_embed(edge(alg, e), f));
            gens.push_back(cohn_embed(ghost(alg, e), f));
        }
        bool commutes = true;
        for (std::size_t a = 0; a < gens.size() && commutes; ++a)
            for (std::size_t b = a + 1; b < gens.size() && commutes; ++b)
                commutes = eq(mul(gens[a], gens[b]), mul(gens[b], gens[a]));
        CHECK(commutes == (g->edge_count() == 0));
        CHECK(shape_classify(f->graph()).commutative == (g->edge_count() == 0));
    }
}

}
