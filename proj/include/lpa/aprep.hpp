#pragma once

#include "lpa/algebra.hpp"
#include "lpa/trails.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lpa {

/// Finite R-linear combination of basis vectors xi_tau^n of the trail
/// module, tau essentially aperiodic.
class ModuleVector {
public:
    using Key = std::pair<Trail, int>;
    using Terms = std::map<Key, Scalar>;

    explicit ModuleVector(AlgebraPtr algebra) : algebra_(std::move(algebra)) {}

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    const Ring& ring() const noexcept { return algebra_->ring(); }
    const Terms& terms() const& noexcept { return terms_; }
    // keeps `for (auto& t : f(x).terms())` safe on temporaries
    Terms terms() && { return std::move(terms_); }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Throws DomainError for a trail outside the essentially aperiodic set,
    /// UndecidedError when it cannot be told apart from a stored trail.
    void add_term(const Trail& t, int n, const Scalar& c);

    ModuleVector& operator+=(const ModuleVector& other);
    ModuleVector& operator-=(const ModuleVector& other);
    friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
    friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
    ModuleVector scaled(const Scalar& c) const;

    /// Distinct trails carrying a nonzero coefficient, in key order.
    std::vector<Trail> support() const;

    friend bool operator==(const ModuleVector& a, const ModuleVector& b) {
        return a.terms_ == b.terms_;
    }

private:
    AlgebraPtr algebra_;
    Terms terms_;
};

ModuleVector vec(const AlgebraPtr& alg, const Trail& t, int n);

/// S_alpha xi_tau^n = xi_{alpha tau}^{n + l(alpha)} when r(alpha) = s(tau);
/// S_beta^* xi_tau^n = xi_{tau'}^{n - l(beta)} when tau = beta tau'.
ModuleVector pi_ap(const Element& x, const ModuleVector& m);

/// Keeps xi_tau^n with alpha <= tau.
ModuleVector p_project(const Path& alpha, const ModuleVector& m);
/// Keeps xi_tau'^n with tau' = tau.
ModuleVector q_project(const Trail& tau, const ModuleVector& m);

/// sum over tau in supp(m) of Q_tau Pi(x) Q_tau m.
ModuleVector e_ap(const Element& x, const ModuleVector& m);

/// The scalar with Q_tau Pi(x) = eps Q_tau for diagonal x: the sum of the
/// coefficients of the terms alpha alpha^* with alpha <= tau.
Scalar epsilon(const Element& x, const Trail& tau);

/// Pi(E_M(x)) m == E_ap(Pi(x)) m.
bool check_em_square(const Element& x, const ModuleVector& m);

/// `3*periodic:g|c@0 - finite:g@2`: terms `coeff * trail @ degree`.
ModuleVector parse_vector(const AlgebraPtr& alg, std::string_view text);
std::string format_vector(const ModuleVector& m);

} // namespace lpa
