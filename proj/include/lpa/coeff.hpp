#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lpa {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A coefficient value. The meaning of the stored data depends on the Ring
/// that produced it: integer-like and rational rings use `value`, Laurent
/// rings use the sparse `laurent` list. Scalars are only ever created by a
/// Ring, so every stored representation is canonical and structural equality
/// is ring equality.
struct Scalar {
    Rational value;
    /// (exponent, coefficient) sorted by exponent, coefficients nonzero.
    std::vector<std::pair<int, Rational>> laurent;

    friend bool operator==(const Scalar&, const Scalar&) = default;
};

/// Commutative unital coefficient ring with exact equality.
///
/// Supported kinds are the integers, the integers modulo n (n >= 2), the
/// rationals, and the Laurent extension B[x, x^-1] of one of those three.
/// Rationals are kept in lowest terms with positive denominator (this is what
/// cpp_rational does), residues mod n are kept in [0, n).
class Ring {
public:
    enum class Kind { Integers, Modular, Rationals, Laurent };

    static Ring integers();
    static Ring modular(const Integer& modulus);
    static Ring rationals();
    static Ring laurent(const Ring& base);

    /// Parses `Z`, `Z/4`, `Q`, `Laurent(Q)`.
    static Ring parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    bool is_laurent() const noexcept { return kind_ == Kind::Laurent; }
    const Integer& modulus() const noexcept { return modulus_; }
    /// Base ring of a Laurent ring; the ring itself otherwise.
    const Ring& base() const noexcept { return base_ ? *base_ : *this; }
    bool is_finite() const noexcept { return kind_ == Kind::Modular; }
    std::string name() const;

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(long long n) const;
    /// Integer-valued rationals embed into every ring; non-integers only into
    /// rings over Q.
    Scalar from_rational(const Rational& q) const;
    /// x^k in a Laurent ring.
    Scalar variable(int exponent = 1) const;
    /// Builds a Laurent element from (exponent, base coefficient) pairs,
    /// combining repeated exponents and dropping zeros.
    Scalar make_laurent(std::vector<std::pair<int, Rational>> terms) const;

    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    bool is_zero(const Scalar& a) const;
    bool is_one(const Scalar& a) const;
    bool equal(const Scalar& a, const Scalar& b) const { return a == b; }

    /// x^k -> x^-k termwise on Laurent rings; identity elsewhere.
    Scalar conjugate(const Scalar& a) const;

    /// Every element, for finite rings.
    std::optional<std::vector<Scalar>> elements() const;

    /// Coefficients over the base ring as (exponent, value) pairs; a
    /// non-Laurent scalar is reported at exponent 0.
    std::vector<std::pair<int, Rational>> coefficients(const Scalar& a) const;

    std::string format(const Scalar& a) const;
    /// True when `format(a)` would need parentheses to be used as a factor.
    bool is_compound(const Scalar& a) const;
    Scalar parse_scalar(std::string_view text) const;

    friend bool operator==(const Ring& a, const Ring& b);

private:
    Ring(Kind kind, Integer modulus, std::shared_ptr<const Ring> base)
        : kind_(kind), modulus_(std::move(modulus)), base_(std::move(base)) {}

    Rational reduce_base(const Rational& q) const;

    Kind kind_;
    Integer modulus_;
    std::shared_ptr<const Ring> base_;
};

/// Free-standing name used by the command line and tests.
inline Scalar laurent_conjugate(const Ring& ring, const Scalar& p) { return ring.conjugate(p); }

} // namespace lpa
