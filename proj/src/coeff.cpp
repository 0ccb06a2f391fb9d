#include "lpa/coeff.hpp"

#include "lpa/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace lpa {

Ring Ring::integers() { return Ring(Kind::Integers, 0, nullptr); }

Ring Ring::modular(const Integer& modulus) {
    if (modulus < 2)
        throw DomainError("modulus must be at least 2, got " + modulus.str());
    return Ring(Kind::Modular, modulus, nullptr);
}

Ring Ring::rationals() { return Ring(Kind::Rationals, 0, nullptr); }

Ring Ring::laurent(const Ring& base) {
    if (base.is_laurent())
        throw DomainError("nested Laurent extensions are not supported");
    return Ring(Kind::Laurent, 0, std::make_shared<const Ring>(base));
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

Ring Ring::parse(std::string_view text) {
    auto s = trim(text);
    if (s == "Z")
        return integers();
    if (s == "Q")
        return rationals();
    if (s.starts_with("Z/")) {
        auto digits = s.substr(2);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
                return std::isdigit(static_cast<unsigned char>(c));
            }))
            throw ParseError("bad ring modulus in '" + std::string(s) + "'");
        return modular(Integer(std::string(digits)));
    }
    if (s.starts_with("Laurent(") && s.ends_with(")"))
        return laurent(parse(s.substr(8, s.size() - 9)));
    throw ParseError("unknown ring '" + std::string(s) + "' (expected Z, Z/n, Q or Laurent(R))");
}

std::string Ring::name() const {
    switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Modular: return "Z/" + modulus_.str();
    case Kind::Rationals: return "Q";
    case Kind::Laurent: return "Laurent(" + base_->name() + ")";
    }
    return "?";
}

bool operator==(const Ring& a, const Ring& b) {
    if (a.kind_ != b.kind_)
        return false;
    switch (a.kind_) {
    case Ring::Kind::Modular: return a.modulus_ == b.modulus_;
    case Ring::Kind::Laurent: return *a.base_ == *b.base_;
    default: return true;
    }
}

Rational Ring::reduce_base(const Rational& q) const {
    switch (kind_) {
    case Kind::Laurent: return base_->reduce_base(q);
    case Kind::Rationals: return q;
    case Kind::Integers:
        if (denominator(q) != 1)
            throw DomainError("non-integer value " + q.str() + " in Z");
        return q;
    case Kind::Modular: {
        if (denominator(q) != 1)
            throw DomainError("non-integer value " + q.str() + " in " + name());
        Integer r = numerator(q) % modulus_;
        if (r < 0)
            r += modulus_;
        return Rational(r);
    }
    }
    return q;
}

Scalar Ring::zero() const { return Scalar{}; }

Scalar Ring::one() const { return from_int(1); }

Scalar Ring::from_int(long long n) const { return from_rational(Rational(n)); }

Scalar Ring::from_rational(const Rational& q) const {
    if (is_laurent())
        return make_laurent({{0, q}});
    return Scalar{reduce_base(q), {}};
}

Scalar Ring::variable(int exponent) const {
    if (!is_laurent())
        throw DomainError("ring " + name() + " has no variable x");
    return make_laurent({{exponent, Rational(1)}});
}

Scalar Ring::make_laurent(std::vector<std::pair<int, Rational>> terms) const {
    if (!is_laurent())
        throw DomainError("ring " + name() + " is not a Laurent ring");
    std::map<int, Rational> acc;
    for (auto& [k, c] : terms)
        acc[k] += c;
    Scalar out;
    for (auto& [k, c] : acc) {
        Rational r = reduce_base(c);
        if (r != 0)
            out.laurent.emplace_back(k, std::move(r));
    }
    return out;
}

Scalar Ring::add(const Scalar& a, const Scalar& b) const {
    if (!is_laurent())
        return Scalar{reduce_base(a.value + b.value), {}};
    Scalar out;
    auto i = a.laurent.begin();
    auto j = b.laurent.begin();
    while (i != a.laurent.end() || j != b.laurent.end()) {
        if (j == b.laurent.end() || (i != a.laurent.end() && i->first < j->first)) {
            out.laurent.push_back(*i++);
        } else if (i == a.laurent.end() || j->first < i->first) {
            out.laurent.push_back(*j++);
        } else {
            Rational c = reduce_base(i->second + j->second);
            if (c != 0)
                out.laurent.emplace_back(i->first, std::move(c));
            ++i;
            ++j;
        }
    }
    return out;
}

Scalar Ring::neg(const Scalar& a) const {
    if (!is_laurent())
        return Scalar{reduce_base(-a.value), {}};
    Scalar out;
    for (auto& [k, c] : a.laurent)
        out.laurent.emplace_back(k, reduce_base(-c));
    return out;
}

Scalar Ring::sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }

Scalar Ring::mul(const Scalar& a, const Scalar& b) const {
    if (!is_laurent())
        return Scalar{reduce_base(a.value * b.value), {}};
    std::vector<std::pair<int, Rational>> terms;
    terms.reserve(a.laurent.size() * b.laurent.size());
    for (auto& [k1, c1] : a.laurent)
        for (auto& [k2, c2] : b.laurent)
            terms.emplace_back(k1 + k2, c1 * c2);
    return make_laurent(std::move(terms));
}

bool Ring::is_zero(const Scalar& a) const {
    return is_laurent() ? a.laurent.empty() : a.value == 0;
}

bool Ring::is_one(const Scalar& a) const { return a == one(); }

Scalar Ring::conjugate(const Scalar& a) const {
    if (!is_laurent())
        return a;
    Scalar out;
    for (auto it = a.laurent.rbegin(); it != a.laurent.rend(); ++it)
        out.laurent.emplace_back(-it->first, it->second);
    return out;
}

std::optional<std::vector<Scalar>> Ring::elements() const {
    if (kind_ != Kind::Modular)
        return std::nullopt;
    std::vector<Scalar> out;
    for (Integer i = 0; i < modulus_; ++i)
        out.push_back(Scalar{Rational(i), {}});
    return out;
}

std::vector<std::pair<int, Rational>> Ring::coefficients(const Scalar& a) const {
    if (is_laurent())
        return a.laurent;
    if (a.value == 0)
        return {};
    return {{0, a.value}};
}

namespace {

std::string format_rational(const Rational& q) {
    if (denominator(q) == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

std::string format_monomial(int k) {
    if (k == 1)
        return "x";
    return "x^" + std::to_string(k);
}

} // namespace

std::string Ring::format(const Scalar& a) const {
    if (!is_laurent())
        return format_rational(a.value);
    if (a.laurent.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = a.laurent.rbegin(); it != a.laurent.rend(); ++it) {
        auto [k, c] = *it;
        bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        if (k == 0)
            os << format_rational(mag);
        else if (mag == 1)
            os << format_monomial(k);
        else
            os << format_rational(mag) << "*" << format_monomial(k);
    }
    return os.str();
}

bool Ring::is_compound(const Scalar& a) const {
    if (!is_laurent())
        return false;
    if (a.laurent.size() > 1)
        return true;
    // single non-constant term: "x", "2*x^3"
    return a.laurent.size() == 1 && a.laurent.front().first != 0;
}

namespace {

/// Recursive-descent parser for coefficient literals:
///   expr := term (('+'|'-') term)*
///   term := unary ('*' unary)*
///   unary := '-' unary | power
///   power := primary ('^' '-'? digits)?
///   primary := digits ('/' digits)? | 'x' | '(' expr ')'
class ScalarParser {
public:
    ScalarParser(const Ring& ring, std::string_view text) : ring_(ring), s_(text) {}

    Scalar parse() {
        Scalar v = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("bad coefficient '" + std::string(s_) + "': " + msg);
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

    Integer digits() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    Scalar expr() {
        Scalar v = term();
        for (;;) {
            if (accept('+'))
                v = ring_.add(v, term());
            else if (accept('-'))
                v = ring_.sub(v, term());
            else
                return v;
        }
    }

    Scalar term() {
        Scalar v = unary();
        while (accept('*'))
            v = ring_.mul(v, unary());
        return v;
    }

    Scalar unary() {
        if (accept('-'))
            return ring_.neg(unary());
        return power();
    }

    Scalar power() {
        bool is_x = false;
        Scalar base = primary(is_x);
        if (!accept('^'))
            return base;
        bool negative = accept('-');
        Integer e = digits();
        if (e > 1000000)
            fail("exponent too large");
        int k = static_cast<int>(e);
        if (negative) {
            if (!is_x)
                fail("negative exponents apply to x only");
            return ring_.variable(-k);
        }
        Scalar out = ring_.one();
        for (int i = 0; i < k; ++i)
            out = ring_.mul(out, base);
        return out;
    }

    Scalar primary(bool& is_x) {
        skip();
        if (accept('(')) {
            Scalar v = expr();
            if (!accept(')'))
                fail("missing ')'");
            return v;
        }
        if (pos_ < s_.size() && s_[pos_] == 'x') {
            ++pos_;
            is_x = true;
            return ring_.variable(1);
        }
        Integer num = digits();
        if (accept('/')) {
            Integer den = digits();
            if (den == 0)
                fail("zero denominator");
            return ring_.from_rational(Rational(num, den));
        }
        return ring_.from_rational(Rational(num));
    }

    const Ring& ring_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

Scalar Ring::parse_scalar(std::string_view text) const {
    return ScalarParser(*this, text).parse();
}

} // namespace lpa
