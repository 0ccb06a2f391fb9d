#pragma once

#include "lpa/algebra.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpa {

/// Square matrix with entries in the ring of its TargetAlgebra, row-major.
struct Matrix {
    std::size_t n = 0;
    std::vector<Scalar> entries;

    const Scalar& at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    Scalar& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// k x k matrices over a ring T with involution transpose followed by
/// entrywise conjugation (x -> x^-1 on Laurent entries).
class TargetAlgebra {
public:
    TargetAlgebra(Ring ring, std::size_t k);

    const Ring& ring() const noexcept { return ring_; }
    std::size_t size() const noexcept { return k_; }
    std::string name() const;

    Matrix zero() const;
    Matrix identity() const;
    Matrix scalar(const Scalar& c) const;
    Matrix add(const Matrix& a, const Matrix& b) const;
    Matrix sub(const Matrix& a, const Matrix& b) const;
    Matrix mul(const Matrix& a, const Matrix& b) const;
    Matrix scale(const Scalar& c, const Matrix& a) const;
    Matrix star(const Matrix& a) const;
    bool is_zero(const Matrix& a) const;

    /// Common Laurent degree of the entries when every nonzero entry is a
    /// single monomial of the same degree; 0 for constant matrices over a
    /// non-Laurent ring and for the zero matrix.
    std::optional<int> homogeneous_degree(const Matrix& a) const;

    /// `[[1,0],[0,x]]`.
    Matrix parse(std::string_view text) const;
    std::string format(const Matrix& a) const;

private:
    Ring ring_;
    std::size_t k_;
};

/// Assignment of target matrices to the vertices and edges of a graph. The
/// coefficient ring R of the represented algebra maps into the target ring
/// by `embed`.
struct CKSystem {
    GraphPtr graph;
    /// Coefficient ring R of L_R(E).
    Ring coeff_ring;
    TargetAlgebra target;
    std::vector<Matrix> vertex_images;
    std::vector<Matrix> edge_images;

    AlgebraPtr algebra() const { return Algebra::create(graph, coeff_ring); }
    /// The structure map R -> T.
    Scalar embed(const Scalar& r) const;
};

/// The ring map R -> T exists for R = T, R = base(T), R = Z, and
/// R = Z/n -> Z/m with m | n (also into Laurent(Z/m)).
bool ring_maps_into(const Ring& r, const Ring& t);

/// System file:
///
///     system: loop.graph          (relative to base_dir)
///     ring: Z                     (optional; default base(T))
///     target: matrix 2 over Laurent(Q)
///     S v = [[1,0],[0,1]]
///
/// Unassigned generators map to the zero matrix. With `over_F`, the graph
/// read from the file is replaced by F(E) before the assignments are read.
CKSystem parse_system(std::string_view text, const std::filesystem::path& base_dir,
                      bool over_F = false);
/// Same format without the `system:` line (which is ignored if present).
CKSystem parse_system(std::string_view text, GraphPtr graph);
/// Replaces the coefficient ring after checking it maps into the target.
void set_coeff_ring(CKSystem& sys, const Ring& r);

struct CKReport {
    bool valid = true;
    std::vector<std::string> violations;
};

/// Checks the five Cuntz-Krieger system relations by exact arithmetic.
CKReport ck_validate(const CKSystem& sys);

/// Image of a path: product of the edge matrices (the vertex matrix for a
/// vertex).
Matrix path_image(const CKSystem& sys, const Path& p);
/// Phi(x), evaluated on the normal form; throws DomainError for an invalid
/// system or an element over a different graph or ring.
Matrix hom_apply(const CKSystem& sys, const Element& x);

struct ReductionCertificate {
    enum class Kind { ScalarVertex, CyclePolynomial };
    Path mu;
    Path nu;
    Kind kind = Kind::ScalarVertex;
    /// ScalarVertex: mu^* a nu = r v.
    Scalar r;
    VertexId v = 0;
    /// CyclePolynomial: mu^* a nu = p(lambda), p in R[x, x^-1].
    Path lambda;
    Scalar p;
};

/// First (mu, nu) by total length, then mu, then nu, with l(mu), l(nu) <=
/// path_bound and mu^* a nu of one of the two reduced shapes.
std::optional<ReductionCertificate> reduce_search(const Element& a, std::size_t path_bound);
/// mu^* a nu recomputed and compared with the certificate's outcome.
bool replay(const ReductionCertificate& cert, const Element& a);
Element certificate_outcome(const AlgebraPtr& alg, const ReductionCertificate& cert);
std::string format_certificate(const Graph& g, const Ring& r, const ReductionCertificate& cert);

struct ConditionA {
    bool pass = true;
    /// Every r in R was tried (R finite).
    bool exhaustive = false;
    std::size_t samples = 0;
    /// A vertex v and r != 0 with Phi(r v) = 0.
    std::optional<std::pair<VertexId, Scalar>> witness;
};

struct ConditionB {
    Path alpha;
    bool pass = true;
    /// Largest Laurent degree bound the check covered.
    int bound = 0;
    /// Nonzero p in R[x] with p(Phi(omega_alpha)) = 0, leading coefficient
    /// positive where R is ordered.
    std::optional<Scalar> annihilator;
};

struct UniquenessReport {
    enum class Verdict { Injective, NotInjective, VerifiedAtBound };
    Verdict verdict = Verdict::VerifiedAtBound;
    ConditionA a;
    std::vector<ConditionB> b;
    bool condition_L = false;
    bool graded = false;
    std::string reason;
};

std::string to_string(UniquenessReport::Verdict v);

/// Condition (a) on all of R when finite, else on `samples` elements;
/// condition (b) for distinguished paths of length <= 2 with Laurent support
/// in [-degree_bound, degree_bound].
UniquenessReport check_conditions(const CKSystem& sys, int degree_bound,
                                  std::size_t samples = 24);

/// The standard map C_R(E) -> L_R(F(E)): v -> v + v' for regular v, e -> e +
/// e' when r(e) is regular, e^* -> (image of e)^*. `x` is read as a Cohn
/// expression (no CK-2 reduction is applied to it).
Element cohn_embed(const Element& x, const AlgebraPtr& f_algebra);
/// Algebra over F(E) matching the ring and default special edges of `alg`.
AlgebraPtr cohn_algebra(const AlgebraPtr& alg);
/// check_conditions on a system over F(E); condition (b) is vacuous there.
UniquenessReport cohn_check(const CKSystem& sys_over_F, int degree_bound,
                            std::size_t samples = 24);

} // namespace lpa
