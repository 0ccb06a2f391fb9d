#pragma once

#include "lpa/algebra.hpp"
#include "lpa/trails.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lpa {

/// Membership of a generator alpha beta^* in the normal generator set.
enum class GeneratorClass {
    Diagonal,
    /// alpha = beta rho with rho a nonempty power of a cycle without exits.
    NormalUp,
    /// beta = alpha rho, same condition.
    NormalDown,
    NonNormal,
};

std::string to_string(GeneratorClass c);

GeneratorClass classify_generator(const Graph& g, const Monomial& m);
bool is_normal_generator(const Graph& g, const Monomial& m);

/// x x^* = x^* x.
bool is_normal(const Element& x);

/// Keeps the terms whose monomial is a normal generator. Applied to any
/// spanning representation of an element, the result is independent of the
/// representation up to eq.
Element project_terms(const Element& x);
/// The conditional expectation onto the commutative core, in normal form.
Element core_project(const Element& x);
bool in_core(const Element& x);

struct CommutantWitness {
    enum class Status { InCore, Found, Inconclusive };
    Status status = Status::InCore;
    /// Set when status is Found: x alpha alpha^* != alpha alpha^* x.
    std::optional<Path> alpha;
};

std::string to_string(CommutantWitness::Status s);

/// Searches alpha in path order with l(alpha) <= max_len.
CommutantWitness diagonal_commutant_witness(const Element& x, std::size_t max_len);

/// omega_alpha^n; n = 0 gives alpha alpha^*. Throws unless alpha is
/// distinguished.
Element omega(const AlgebraPtr& alg, const Path& alpha, int n);
/// sum r_k x^k  ->  sum r_k omega_alpha^k. `p` lives in Laurent(R) for the
/// algebra's ring R.
Element gamma_iso(const AlgebraPtr& alg, const Scalar& p, const Path& alpha);
/// Inverse of gamma_iso; throws DomainError when x is not in <omega_alpha>.
Scalar gamma_iso_inverse(const Element& x, const Path& alpha);
/// The Laurent ring that gamma_iso reads its argument from.
Ring omega_ring(const Ring& r);

struct CornerResult {
    /// P x P with P = tau_ess tau_ess^*, normal form.
    Element corner;
    /// E_M(x) P, normal form.
    Element expected;
    bool matches;
};

/// Throws DomainError unless tau is discrete.
CornerResult corner_project(const Element& x, const Trail& tau);

struct DecompositionReport {
    /// Each contributes a copy of R.
    std::vector<Trail> finite;
    /// Each contributes a copy of R[x, x^-1].
    std::vector<Trail> infinite;
    /// The graph is a disjoint union of isolated vertices and loops, so the
    /// summands are all of L_R(E).
    bool complete = false;
};

DecompositionReport disc_decomposition(const Graph& g, std::size_t max_head_len);

} // namespace lpa
