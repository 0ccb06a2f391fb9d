#pragma once

#include "lpa/coeff.hpp"
#include "lpa/graph.hpp"

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpa {

/// Choice of one edge gamma_v in s^-1(v) per regular vertex v. The CK-2
/// relation is applied as the rewrite (a.gamma)(b.gamma)* -> ab* - sum of
/// (a.e)(b.e)* over the other edges e at v.
class SpecialEdgeChoice {
public:
    /// Lexicographically least edge at each regular vertex.
    static SpecialEdgeChoice lexicographic(const Graph& g);
    /// `v=e,u=g`; unlisted vertices keep the lexicographic default.
    static SpecialEdgeChoice parse(const Graph& g, std::string_view text);

    std::optional<EdgeId> at(VertexId v) const { return special_.at(v); }
    bool is_special(const Graph& g, EdgeId e) const { return special_.at(g.source(e)) == e; }

    friend bool operator==(const SpecialEdgeChoice&, const SpecialEdgeChoice&) = default;

private:
    std::vector<std::optional<EdgeId>> special_;
};

/// L_R(E) for a fixed graph, coefficient ring and special-edge choice.
class Algebra {
public:
    Algebra(GraphPtr graph, Ring ring, SpecialEdgeChoice special)
        : graph_(std::move(graph)), ring_(std::move(ring)), special_(std::move(special)) {}

    static std::shared_ptr<const Algebra> create(GraphPtr graph, Ring ring);
    static std::shared_ptr<const Algebra> create(GraphPtr graph, Ring ring,
                                                 SpecialEdgeChoice special);

    const Graph& graph() const noexcept { return *graph_; }
    const GraphPtr& graph_ptr() const noexcept { return graph_; }
    const Ring& ring() const noexcept { return ring_; }
    const SpecialEdgeChoice& special() const noexcept { return special_; }

    bool compatible(const Algebra& other) const;

private:
    GraphPtr graph_;
    Ring ring_;
    SpecialEdgeChoice special_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// alpha beta^* with r(alpha) = r(beta).
struct Monomial {
    Path alpha;
    Path beta;

    int degree() const {
        return static_cast<int>(alpha.length()) - static_cast<int>(beta.length());
    }
    bool is_diagonal() const { return alpha == beta; }

    /// Graded degree first, then alpha, then beta.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Product of two monomials by the generator-set multiplication rule;
/// nullopt when the product vanishes.
std::optional<Monomial> multiply(const Monomial& x, const Monomial& y);

/// Neither side ends in the same special edge.
bool is_basis_monomial(const Graph& g, const SpecialEdgeChoice& special, const Monomial& m);

/// Exact R-linear combination of monomials. Elements are never normalized
/// implicitly; `normal_form` does that on request.
class Element {
public:
    using Terms = std::map<Monomial, Scalar>;

    explicit Element(AlgebraPtr algebra) : algebra_(std::move(algebra)) {}

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    const Ring& ring() const noexcept { return algebra_->ring(); }
    const Graph& graph() const noexcept { return algebra_->graph(); }
    const Terms& terms() const& noexcept { return terms_; }
    // keeps `for (auto& t : f(x).terms())` safe on temporaries
    Terms terms() && { return std::move(terms_); }
    bool has_no_terms() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Every term is a basis monomial of the special-edge basis.
    bool is_canonical() const;

    /// Adds c * m, merging with an existing term and dropping zeros.
    void add_term(const Monomial& m, const Scalar& c);

    Element& operator+=(const Element& other);
    Element& operator-=(const Element& other);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator-(const Element& a);
    friend Element operator*(const Element& a, const Element& b);

    Element scaled(const Scalar& c) const;

private:
    AlgebraPtr algebra_;
    Terms terms_;
};

/// Throws DomainError unless both elements live in the same algebra.
void require_compatible(const Element& x, const Element& y);

Element zero(const AlgebraPtr& alg);
/// Single term alpha beta^*, or zero when r(alpha) != r(beta).
Element mono(const AlgebraPtr& alg, const Path& alpha, const Path& beta);
Element mono(const AlgebraPtr& alg, const Monomial& m);
Element vertex(const AlgebraPtr& alg, VertexId v);
Element edge(const AlgebraPtr& alg, EdgeId e);
Element ghost(const AlgebraPtr& alg, EdgeId e);
/// Sum of all vertices, the unit of L_R(E) for a finite graph.
Element unit(const AlgebraPtr& alg);

Element mul(const Element& x, const Element& y);
Element star(const Element& x);

enum class RewriteStrategy {
    /// Reduces each term to exhaustion before merging.
    Recursive,
    /// Rewrites one redex at a time, always the greatest reducible term.
    Worklist,
};

Element normal_form(const Element& x, RewriteStrategy strategy = RewriteStrategy::Recursive);
bool is_zero(const Element& x);
bool eq(const Element& x, const Element& y);

/// Homogeneous components keyed by degree l(alpha) - l(beta).
std::map<int, Element> graded_parts(const Element& x);

/// The path expansion of S_v at depth k: all length-k paths from v plus the
/// shorter ones that end in a sink.
Element expand_vertex(const AlgebraPtr& alg, VertexId v, std::size_t k);

/// Basis monomials with l(alpha), l(beta) <= max_len, in monomial order.
std::vector<Monomial> basis_monomials(const AlgebraPtr& alg, std::size_t max_len);

/// Grammar:
///   element := term (('+'|'-') term)*
///   term    := coeff? '*'? factor ('.' factor)*  |  coeff
///   factor  := identifier '*'?
/// A coefficient is a number, `a/b`, `x`, `x^k`, or a parenthesized ring
/// expression. A bare coefficient term means coeff * (sum of all vertices).
Element parse_expr(const AlgebraPtr& alg, std::string_view text);

std::string format_monomial(const Graph& g, const Monomial& m);
std::string format(const Element& x);

} // namespace lpa
