#include "lpa/core.hpp"

#include "lpa/errors.hpp"

namespace lpa {

std::string to_string(GeneratorClass c) {
    switch (c) {
    case GeneratorClass::Diagonal: return "diagonal";
    case GeneratorClass::NormalUp: return "normal-up";
    case GeneratorClass::NormalDown: return "normal-down";
    case GeneratorClass::NonNormal: return "non-normal";
    }
    return "?";
}

GeneratorClass classify_generator(const Graph& g, const Monomial& m) {
    if (m.alpha == m.beta)
        return GeneratorClass::Diagonal;
    if (auto rho = strip_prefix(m.beta, m.alpha); rho && is_closed_without_exits(g, *rho))
        return GeneratorClass::NormalUp;
    if (auto rho = strip_prefix(m.alpha, m.beta); rho && is_closed_without_exits(g, *rho))
        return GeneratorClass::NormalDown;
    return GeneratorClass::NonNormal;
}

bool is_normal_generator(const Graph& g, const Monomial& m) {
    return classify_generator(g, m) != GeneratorClass::NonNormal;
}

bool is_normal(const Element& x) {
    Element xs = star(x);
    return eq(mul(x, xs), mul(xs, x));
}

Element project_terms(const Element& x) {
    Element out(x.algebra());
    for (const auto& [m, c] : x.terms())
        if (is_normal_generator(x.graph(), m))
            out.add_term(m, c);
    return out;
}

Element core_project(const Element& x) { return project_terms(normal_form(x)); }

bool in_core(const Element& x) {
    Element nf = normal_form(x);
    return project_terms(nf).size() == nf.size();
}

std::string to_string(CommutantWitness::Status s) {
    switch (s) {
    case CommutantWitness::Status::InCore: return "in-core";
    case CommutantWitness::Status::Found: return "found";
    case CommutantWitness::Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

CommutantWitness diagonal_commutant_witness(const Element& x, std::size_t max_len) {
    CommutantWitness out;
    if (in_core(x))
        return out;
    const AlgebraPtr& alg = x.algebra();
    for (const Path& a : x.graph().all_paths(max_len)) {
        Element d = mono(alg, a, a);
        if (!eq(mul(x, d), mul(d, x))) {
            out.status = CommutantWitness::Status::Found;
            out.alpha = a;
            return out;
        }
    }
    out.status = CommutantWitness::Status::Inconclusive;
    return out;
}

namespace {

Path cycle_power(const Path& lambda, int n) {
    Path out = Path::vertex(lambda.source());
    for (int i = 0; i < n; ++i)
        out = concat(out, lambda);
    return out;
}

Path require_distinguished_cycle(const Graph& g, const Path& alpha) {
    if (!is_distinguished(g, alpha))
        throw DomainError(g.format_path(alpha) + " is not a distinguished path");
    return *exit_free_cycle_at(g, alpha.range());
}

} // namespace

Element omega(const AlgebraPtr& alg, const Path& alpha, int n) {
    Path lambda = require_distinguished_cycle(alg->graph(), alpha);
    if (n == 0)
        return mono(alg, alpha, alpha);
    Path longer = concat(alpha, cycle_power(lambda, n > 0 ? n : -n));
    return n > 0 ? mono(alg, longer, alpha) : mono(alg, alpha, longer);
}

Ring omega_ring(const Ring& r) {
    if (r.is_laurent())
        throw DomainError("omega calculus needs a non-Laurent coefficient ring, got " + r.name());
    return Ring::laurent(r);
}

Element gamma_iso(const AlgebraPtr& alg, const Scalar& p, const Path& alpha) {
    const Ring& r = alg->ring();
    Ring lr = omega_ring(r);
    Element out = zero(alg);
    for (const auto& [k, c] : lr.coefficients(p))
        out += omega(alg, alpha, k).scaled(r.from_rational(c));
    return out;
}

Scalar gamma_iso_inverse(const Element& x, const Path& alpha) {
    const AlgebraPtr& alg = x.algebra();
    const Graph& g = alg->graph();
    const Ring& r = alg->ring();
    Ring lr = omega_ring(r);
    Path lambda = require_distinguished_cycle(g, alpha);
    auto not_in_span = [&]() {
        return DomainError("element is not in the algebra generated by omega_" +
                           g.format_path(alpha));
    };

    // omega^k for k != 0 is a basis monomial; read those coefficients off.
    Element nf = normal_form(x);
    std::vector<std::pair<int, Rational>> terms;
    Element rest = nf;
    for (const auto& [m, c] : nf.terms()) {
        int k = 0;
        if (auto rho = strip_prefix(alpha, m.alpha); rho && m.beta == alpha && !rho->is_vertex())
            k = static_cast<int>((rho->length() + lambda.length() - 1) / lambda.length());
        else if (auto rho = strip_prefix(alpha, m.beta); rho && m.alpha == alpha && !rho->is_vertex())
            k = -static_cast<int>((rho->length() + lambda.length() - 1) / lambda.length());
        if (k == 0)
            continue;
        if ((m.alpha.length() + m.beta.length() - 2 * alpha.length()) % lambda.length() != 0)
            throw not_in_span();
        terms.emplace_back(k, c.value);
        rest -= omega(alg, alpha, k).scaled(c);
    }

    // What remains must be c * alpha alpha^*; its normal form has a term with
    // coefficient +-1, which fixes c.
    rest = normal_form(rest);
    if (!rest.has_no_terms()) {
        Element unit_part = normal_form(omega(alg, alpha, 0));
        std::optional<Scalar> c0;
        for (const auto& [m, u] : unit_part.terms()) {
            if (!r.is_one(u) && !r.is_one(r.neg(u)))
                continue;
            auto it = rest.terms().find(m);
            c0 = it == rest.terms().end() ? r.zero() : r.mul(it->second, u);
            break;
        }
        if (!c0)
            throw not_in_span();
        terms.emplace_back(0, c0->value);
    }
    Scalar p = lr.make_laurent(std::move(terms));
    if (!eq(x, gamma_iso(alg, p, alpha)))
        throw not_in_span();
    return p;
}

CornerResult corner_project(const Element& x, const Trail& tau) {
    const AlgebraPtr& alg = x.algebra();
    const Graph& g = alg->graph();
    if (!is_discrete(g, tau))
        throw DomainError("corner projection needs a discrete trail, got " + format_trail(g, tau));
    Path a = essential_head(g, tau);
    Element p = mono(alg, a, a);
    Element corner = normal_form(mul(mul(p, x), p));
    Element expected = normal_form(mul(core_project(x), p));
    bool matches = eq(corner, expected);
    return {std::move(corner), std::move(expected), matches};
}

DecompositionReport disc_decomposition(const Graph& g, std::size_t max_head_len) {
    DecompositionReport out;
    for (auto& t : enumerate_discrete(g, max_head_len))
        (t.is_finite() ? out.finite : out.infinite).push_back(t);
    out.complete = shape_classify(g).commutative;
    return out;
}

} // namespace lpa
