#include "lpa/algebra.hpp"

#include "lpa/errors.hpp"

#include <cctype>
#include <sstream>

namespace lpa {

// ---------------------------------------------------------------------------
// Special edges and algebra context

SpecialEdgeChoice SpecialEdgeChoice::lexicographic(const Graph& g) {
    SpecialEdgeChoice out;
    out.special_.resize(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.is_regular(v))
            out.special_[v] = g.out_edges(v).front();
    return out;
}

SpecialEdgeChoice SpecialEdgeChoice::parse(const Graph& g, std::string_view text) {
    SpecialEdgeChoice out = lexicographic(g);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string item(text.substr(pos, end - pos));
        pos = end + 1;
        std::erase_if(item, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("special edge assignment '" + item + "' is not of the form v=e");
        auto v = g.find_vertex(item.substr(0, eq));
        auto e = g.find_edge(item.substr(eq + 1));
        if (!v)
            throw ParseError("unknown vertex '" + item.substr(0, eq) + "'");
        if (!e)
            throw ParseError("unknown edge '" + item.substr(eq + 1) + "'");
        if (g.source(*e) != *v)
            throw DomainError("special edge " + g.edge_name(*e) + " does not start at " +
                              g.vertex_name(*v));
        out.special_[*v] = *e;
    }
    return out;
}

std::shared_ptr<const Algebra> Algebra::create(GraphPtr graph, Ring ring) {
    auto special = SpecialEdgeChoice::lexicographic(*graph);
    return std::make_shared<const Algebra>(std::move(graph), std::move(ring), std::move(special));
}

std::shared_ptr<const Algebra> Algebra::create(GraphPtr graph, Ring ring,
                                               SpecialEdgeChoice special) {
    return std::make_shared<const Algebra>(std::move(graph), std::move(ring), std::move(special));
}

bool Algebra::compatible(const Algebra& other) const {
    if (this == &other)
        return true;
    return (graph_ == other.graph_ || *graph_ == *other.graph_) && ring_ == other.ring_ &&
           special_ == other.special_;
}

void require_compatible(const Element& x, const Element& y) {
    const Algebra& a = *x.algebra();
    const Algebra& b = *y.algebra();
    if (a.compatible(b))
        return;
    if (!(a.ring() == b.ring()))
        throw DomainError("ring mismatch: " + a.ring().name() + " vs " + b.ring().name());
    throw DomainError("elements belong to different graphs or special-edge choices");
}

// ---------------------------------------------------------------------------
// Monomials

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0)
        return c;
    if (auto c = a.alpha <=> b.alpha; c != 0)
        return c;
    return a.beta <=> b.beta;
}

std::optional<Monomial> multiply(const Monomial& x, const Monomial& y) {
    // (a b*)(m n*) = (a m') n*  if m = b m'
    //              = a (n b')*  if b = m b'
    if (auto rest = strip_prefix(x.beta, y.alpha))
        return Monomial{concat(x.alpha, *rest), y.beta};
    if (auto rest = strip_prefix(y.alpha, x.beta))
        return Monomial{x.alpha, concat(y.beta, *rest)};
    return std::nullopt;
}

bool is_basis_monomial(const Graph& g, const SpecialEdgeChoice& special, const Monomial& m) {
    if (m.alpha.is_vertex() || m.beta.is_vertex())
        return true;
    EdgeId e = m.alpha.last_edge();
    return e != m.beta.last_edge() || !special.is_special(g, e);
}

// ---------------------------------------------------------------------------
// Element arithmetic

bool Element::is_canonical() const {
    for (auto& [m, c] : terms_)
        if (!is_basis_monomial(graph(), algebra_->special(), m))
            return false;
    return true;
}

void Element::add_term(const Monomial& m, const Scalar& c) {
    const Ring& r = ring();
    if (r.is_zero(c))
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted)
        return;
    it->second = r.add(it->second, c);
    if (r.is_zero(it->second))
        terms_.erase(it);
}

Element& Element::operator+=(const Element& other) {
    require_compatible(*this, other);
    for (auto& [m, c] : other.terms_)
        add_term(m, c);
    return *this;
}

Element& Element::operator-=(const Element& other) {
    require_compatible(*this, other);
    for (auto& [m, c] : other.terms_)
        add_term(m, ring().neg(c));
    return *this;
}

Element operator-(const Element& a) {
    Element out(a.algebra_);
    for (auto& [m, c] : a.terms_)
        out.terms_.emplace(m, a.ring().neg(c));
    return out;
}

Element operator*(const Element& a, const Element& b) { return mul(a, b); }

Element Element::scaled(const Scalar& c) const {
    Element out(algebra_);
    for (auto& [m, coeff] : terms_)
        out.add_term(m, ring().mul(c, coeff));
    return out;
}

Element zero(const AlgebraPtr& alg) { return Element(alg); }

Element mono(const AlgebraPtr& alg, const Path& alpha, const Path& beta) {
    Element out(alg);
    if (alpha.range() == beta.range())
        out.add_term(Monomial{alpha, beta}, alg->ring().one());
    return out;
}

Element mono(const AlgebraPtr& alg, const Monomial& m) { return mono(alg, m.alpha, m.beta); }

Element vertex(const AlgebraPtr& alg, VertexId v) {
    return mono(alg, Path::vertex(v), Path::vertex(v));
}

Element edge(const AlgebraPtr& alg, EdgeId e) {
    const Graph& g = alg->graph();
    return mono(alg, g.edge_path(e), Path::vertex(g.range(e)));
}

Element ghost(const AlgebraPtr& alg, EdgeId e) {
    const Graph& g = alg->graph();
    return mono(alg, Path::vertex(g.range(e)), g.edge_path(e));
}

Element unit(const AlgebraPtr& alg) {
    Element out(alg);
    for (VertexId v = 0; v < alg->graph().vertex_count(); ++v)
        out.add_term(Monomial{Path::vertex(v), Path::vertex(v)}, alg->ring().one());
    return out;
}

Element mul(const Element& x, const Element& y) {
    require_compatible(x, y);
    const Ring& r = x.ring();
    Element out(x.algebra());
    for (auto& [m1, c1] : x.terms())
        for (auto& [m2, c2] : y.terms())
            if (auto m = multiply(m1, m2))
                out.add_term(*m, r.mul(c1, c2));
    return out;
}

Element star(const Element& x) {
    Element out(x.algebra());
    for (auto& [m, c] : x.terms())
        out.add_term(Monomial{m.beta, m.alpha}, c);
    return out;
}

// ---------------------------------------------------------------------------
// Normal form

namespace {

bool reducible(const Graph& g, const SpecialEdgeChoice& special, const Monomial& m) {
    return !is_basis_monomial(g, special, m);
}

/// One rewrite step on a reducible monomial with coefficient c: emits the
/// correction terms with -c and returns the shortened monomial, which keeps c.
template <class Emit>
Monomial rewrite_step(const Graph& g, const Monomial& m, const Scalar& minus_c, Emit&& emit) {
    EdgeId gamma = m.alpha.last_edge();
    Path a = drop_last(g, m.alpha);
    Path b = drop_last(g, m.beta);
    for (EdgeId e : g.out_edges(g.source(gamma)))
        if (e != gamma)
            emit(Monomial{g.extend(a, e), g.extend(b, e)}, minus_c);
    return Monomial{std::move(a), std::move(b)};
}

} // namespace

Element normal_form(const Element& x, RewriteStrategy strategy) {
    const AlgebraPtr& alg = x.algebra();
    const Graph& g = alg->graph();
    const Ring& r = alg->ring();
    const auto& special = alg->special();
    Element out(alg);

    if (strategy == RewriteStrategy::Recursive) {
        for (auto& [m0, c] : x.terms()) {
            Monomial m = m0;
            Scalar minus_c = r.neg(c);
            while (reducible(g, special, m))
                m = rewrite_step(g, m, minus_c,
                                 [&](const Monomial& t, const Scalar& k) { out.add_term(t, k); });
            out.add_term(m, c);
        }
        return out;
    }

    Element::Terms work = x.terms();
    auto add = [&](const Monomial& t, const Scalar& k) {
        auto [it, inserted] = work.try_emplace(t, k);
        if (!inserted) {
            it->second = r.add(it->second, k);
            if (r.is_zero(it->second))
                work.erase(it);
        }
    };
    for (;;) {
        auto it = work.rbegin();
        while (it != work.rend() && !reducible(g, special, it->first))
            ++it;
        if (it == work.rend())
            break;
        Monomial m = it->first;
        Scalar c = it->second;
        work.erase(m);
        Monomial shorter = rewrite_step(g, m, r.neg(c), add);
        add(shorter, c);
    }
    for (auto& [m, c] : work)
        out.add_term(m, c);
    return out;
}

bool is_zero(const Element& x) { return normal_form(x).has_no_terms(); }

bool eq(const Element& x, const Element& y) {
    require_compatible(x, y);
    return is_zero(x - y);
}

std::map<int, Element> graded_parts(const Element& x) {
    std::map<int, Element> out;
    for (auto& [m, c] : x.terms())
        out.try_emplace(m.degree(), x.algebra()).first->second.add_term(m, c);
    return out;
}

Element expand_vertex(const AlgebraPtr& alg, VertexId v, std::size_t k) {
    const Graph& g = alg->graph();
    Element out(alg);
    for (std::size_t len = 0; len <= k; ++len)
        for (const Path& p : g.paths_from(v, len))
            if (len == k || g.is_sink(p.range()))
                out.add_term(Monomial{p, p}, alg->ring().one());
    return out;
}

std::vector<Monomial> basis_monomials(const AlgebraPtr& alg, std::size_t max_len) {
    const Graph& g = alg->graph();
    std::vector<std::vector<Path>> by_range(g.vertex_count());
    for (Path& p : g.all_paths(max_len))
        by_range[p.range()].push_back(std::move(p));
    std::vector<Monomial> out;
    for (auto& group : by_range)
        for (auto& a : group)
            for (auto& b : group) {
                Monomial m{a, b};
                if (is_basis_monomial(g, alg->special(), m))
                    out.push_back(std::move(m));
            }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ExprParser {
public:
    ExprParser(const AlgebraPtr& alg, std::string_view text) : alg_(alg), s_(text) {}

    Element parse() {
        Element out(alg_);
        skip();
        bool negative = false;
        if (accept('-'))
            negative = true;
        else
            accept('+');
        Element t = term();
        out += negative ? -t : t;
        for (;;) {
            if (accept('+'))
                out += term();
            else if (accept('-'))
                out -= term();
            else
                break;
        }
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("in expression '" + std::string(s_) + "' at column " +
                         std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static bool word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    std::string_view peek_word() {
        skip();
        std::size_t end = pos_;
        while (end < s_.size() && word_char(s_[end]))
            ++end;
        return s_.substr(pos_, end - pos_);
    }

    bool is_identifier(std::string_view w) const {
        const Graph& g = alg_->graph();
        return g.find_vertex(w) || g.find_edge(w);
    }

    static bool all_digits(std::string_view w) {
        return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        });
    }

    /// One coefficient factor, or nullopt if the next token is not one.
    std::optional<Scalar> coefficient_piece() {
        const Ring& ring = alg_->ring();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            std::size_t depth = 0, start = pos_;
            for (; pos_ < s_.size(); ++pos_) {
                if (s_[pos_] == '(')
                    ++depth;
                else if (s_[pos_] == ')' && --depth == 0)
                    break;
            }
            if (pos_ == s_.size())
                fail("missing ')'");
            ++pos_;
            return ring.parse_scalar(s_.substr(start, pos_ - start));
        }
        auto w = peek_word();
        if (w.empty() || is_identifier(w))
            return std::nullopt;
        if (all_digits(w)) {
            std::size_t start = pos_;
            pos_ += w.size();
            if (accept('/')) {
                auto d = peek_word();
                if (!all_digits(d))
                    fail("expected a denominator");
                pos_ += d.size();
            }
            return ring.parse_scalar(s_.substr(start, pos_ - start));
        }
        if (w == "x" && ring.is_laurent()) {
            std::size_t start = pos_;
            pos_ += 1;
            if (accept('^')) {
                accept('-');
                auto d = peek_word();
                if (!all_digits(d))
                    fail("expected an exponent");
                pos_ += d.size();
            }
            return ring.parse_scalar(s_.substr(start, pos_ - start));
        }
        fail("unknown identifier '" + std::string(w) + "'");
    }

    Monomial factor() {
        const Graph& g = alg_->graph();
        auto w = peek_word();
        if (w.empty())
            fail("expected an identifier");
        pos_ += w.size();
        bool ghost = accept('*');
        if (auto v = g.find_vertex(w))
            return Monomial{Path::vertex(*v), Path::vertex(*v)};
        auto e = g.find_edge(w);
        if (!e)
            fail("unknown identifier '" + std::string(w) + "'");
        Path ep = g.edge_path(*e);
        Path rv = Path::vertex(g.range(*e));
        return ghost ? Monomial{rv, ep} : Monomial{ep, rv};
    }

    Element term() {
        const Ring& ring = alg_->ring();
        Scalar coeff = ring.one();
        bool have_coeff = false, dangling_star = false;
        while (auto piece = coefficient_piece()) {
            coeff = ring.mul(coeff, *piece);
            have_coeff = true;
            dangling_star = accept('*');
        }
        auto w = peek_word();
        if (w.empty() || !is_identifier(w)) {
            if (!have_coeff)
                fail("expected a term");
            if (dangling_star)
                fail("expected a factor after '*'");
            return unit(alg_).scaled(coeff);
        }
        std::optional<Monomial> m = factor();
        while (accept('.')) {
            Monomial next = factor();
            if (m)
                m = multiply(*m, next);
        }
        Element out(alg_);
        if (m)
            out.add_term(*m, coeff);
        return out;
    }

    const AlgebraPtr& alg_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

Element parse_expr(const AlgebraPtr& alg, std::string_view text) {
    return ExprParser(alg, text).parse();
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_monomial(const Graph& g, const Monomial& m) {
    if (m.alpha.is_vertex() && m.beta.is_vertex())
        return g.vertex_name(m.alpha.source());
    std::string out;
    if (!m.alpha.is_vertex())
        out = g.format_path(m.alpha);
    const auto& be = m.beta.edges();
    for (auto it = be.rbegin(); it != be.rend(); ++it) {
        if (!out.empty())
            out += '.';
        out += g.edge_name(*it) + "*";
    }
    return out;
}

std::string format(const Element& x) {
    if (x.has_no_terms())
        return "0";
    const Ring& r = x.ring();
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : x.terms()) {
        std::string mono_text = format_monomial(x.graph(), m);
        if (r.is_compound(c)) {
            os << (first ? "" : " + ") << "(" << r.format(c) << ")*" << mono_text;
        } else {
            std::string coeff = r.format(c);
            bool negative = !coeff.empty() && coeff.front() == '-';
            if (negative)
                coeff.erase(0, 1);
            if (first)
                os << (negative ? "-" : "");
            else
                os << (negative ? " - " : " + ");
            if (coeff != "1")
                os << coeff << "*";
            os << mono_text;
        }
        first = false;
    }
    return os.str();
}

} // namespace lpa
