#include "lpa/aprep.hpp"

#include "lpa/core.hpp"
#include "lpa/errors.hpp"

#include <cctype>
#include <sstream>

namespace lpa {

void ModuleVector::add_term(const Trail& t, int n, const Scalar& c) {
    const Graph& g = algebra_->graph();
    if (!is_essentially_aperiodic(g, t))
        throw DomainError("trail " + format_trail(g, t) + " is not essentially aperiodic");
    if (ring().is_zero(c))
        return;
    if (t.is_continuous())
        for (const auto& [key, _] : terms_)
            if (key.first.is_continuous())
                trails_equal(key.first, t); // raises if undecidable
    Key key{t, n};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), c);
        return;
    }
    it->second = ring().add(it->second, c);
    if (ring().is_zero(it->second))
        terms_.erase(it);
}

ModuleVector& ModuleVector::operator+=(const ModuleVector& other) {
    for (const auto& [key, c] : other.terms_)
        add_term(key.first, key.second, c);
    return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& other) {
    for (const auto& [key, c] : other.terms_)
        add_term(key.first, key.second, ring().neg(c));
    return *this;
}

ModuleVector ModuleVector::scaled(const Scalar& c) const {
    ModuleVector out(algebra_);
    for (const auto& [key, d] : terms_)
        out.add_term(key.first, key.second, ring().mul(c, d));
    return out;
}

std::vector<Trail> ModuleVector::support() const {
    std::vector<Trail> out;
    for (const auto& [key, _] : terms_)
        if (out.empty() || !(out.back() == key.first))
            out.push_back(key.first);
    return out;
}

ModuleVector vec(const AlgebraPtr& alg, const Trail& t, int n) {
    ModuleVector out(alg);
    out.add_term(t, n, alg->ring().one());
    return out;
}

ModuleVector pi_ap(const Element& x, const ModuleVector& m) {
    const Graph& g = x.graph();
    const Ring& r = x.ring();
    ModuleVector out(m.algebra());
    for (const auto& [mono_term, c] : normal_form(x).terms()) {
        int shift = mono_term.degree();
        for (const auto& [key, d] : m.terms()) {
            auto rest = strip_prefix(g, mono_term.beta, key.first);
            if (!rest)
                continue;
            out.add_term(prepend(g, mono_term.alpha, *rest), key.second + shift, r.mul(c, d));
        }
    }
    return out;
}

ModuleVector p_project(const Path& alpha, const ModuleVector& m) {
    const Graph& g = m.algebra()->graph();
    ModuleVector out(m.algebra());
    for (const auto& [key, c] : m.terms())
        if (is_prefix(g, alpha, key.first))
            out.add_term(key.first, key.second, c);
    return out;
}

ModuleVector q_project(const Trail& tau, const ModuleVector& m) {
    ModuleVector out(m.algebra());
    for (const auto& [key, c] : m.terms())
        if (trails_equal(tau, key.first))
            out.add_term(key.first, key.second, c);
    return out;
}

ModuleVector e_ap(const Element& x, const ModuleVector& m) {
    ModuleVector out(m.algebra());
    for (const Trail& tau : m.support())
        out += q_project(tau, pi_ap(x, q_project(tau, m)));
    return out;
}

Scalar epsilon(const Element& x, const Trail& tau) {
    const Graph& g = x.graph();
    const Ring& r = x.ring();
    Scalar out = r.zero();
    for (const auto& [m, c] : normal_form(x).terms()) {
        if (!m.is_diagonal())
            throw DomainError("epsilon needs a diagonal element; found term " +
                              format_monomial(g, m));
        if (is_prefix(g, m.alpha, tau))
            out = r.add(out, c);
    }
    return out;
}

bool check_em_square(const Element& x, const ModuleVector& m) {
    return pi_ap(core_project(x), m) == e_ap(x, m);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

ModuleVector parse_vector(const AlgebraPtr& alg, std::string_view text) {
    const Ring& r = alg->ring();
    ModuleVector out(alg);
    auto fail = [&](const std::string& why) {
        return ParseError("bad vector literal '" + std::string(text) + "': " + why);
    };

    // Terms are split at a top-level sign that starts the text or follows
    // whitespace; signs inside trail literals (thue-morse, @-2, +3) never do.
    std::vector<std::pair<bool, std::string_view>> terms;
    int depth = 0;
    std::size_t start = 0;
    bool negative = false;
    std::string_view body = trim(text);
    if (body.empty())
        throw fail("empty");
    for (std::size_t i = 0; i <= body.size(); ++i) {
        char ch = i < body.size() ? body[i] : '\0';
        if (ch == '(')
            ++depth;
        else if (ch == ')')
            --depth;
        bool split = i == body.size() ||
                     (depth == 0 && (ch == '+' || ch == '-') &&
                      (i == 0 || std::isspace(static_cast<unsigned char>(body[i - 1]))));
        if (!split)
            continue;
        auto piece = trim(body.substr(start, i - start));
        if (!piece.empty())
            terms.emplace_back(negative, piece);
        else if (i != 0)
            throw fail("missing term");
        negative = ch == '-';
        start = i + 1;
    }

    for (auto [neg, piece] : terms) {
        auto at = piece.rfind('@');
        if (at == std::string_view::npos)
            throw fail("term '" + std::string(piece) + "' lacks '@<degree>'");
        int n = 0;
        try {
            std::size_t used = 0;
            std::string deg(trim(piece.substr(at + 1)));
            n = std::stoi(deg, &used);
            if (used != deg.size())
                throw std::invalid_argument(deg);
        } catch (const std::exception&) {
            throw fail("bad degree in '" + std::string(piece) + "'");
        }
        std::string_view lhs = trim(piece.substr(0, at));
        Scalar c = r.one();
        // a coefficient is whatever precedes the '*' that precedes the trail kind
        for (std::string_view kind : {"finite:", "periodic:", "cont:"}) {
            auto k = lhs.find(kind);
            if (k == std::string_view::npos)
                continue;
            auto coeff = trim(lhs.substr(0, k));
            if (!coeff.empty()) {
                if (coeff.back() != '*')
                    throw fail("expected '*' after coefficient");
                c = r.parse_scalar(trim(coeff.substr(0, coeff.size() - 1)));
            }
            lhs = lhs.substr(k);
            break;
        }
        if (neg)
            c = r.neg(c);
        out.add_term(parse_trail(alg->graph_ptr(), lhs), n, c);
    }
    return out;
}

std::string format_vector(const ModuleVector& m) {
    if (m.is_zero())
        return "0";
    const Ring& r = m.ring();
    const Graph& g = m.algebra()->graph();
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : m.terms()) {
        std::string body = format_trail(g, key.first) + "@" + std::to_string(key.second);
        if (r.is_compound(c)) {
            os << (first ? "" : " + ") << "(" << r.format(c) << ")*" << body;
        } else {
            std::string coeff = r.format(c);
            bool negative = !coeff.empty() && coeff.front() == '-';
            if (negative)
                coeff.erase(0, 1);
            os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
            if (coeff != "1")
                os << coeff << "*";
            os << body;
        }
        first = false;
    }
    return os.str();
}

} // namespace lpa
