#pragma once

#include "lpa/algebra.hpp"
#include "lpa/graph.hpp"

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpa {

/// Infinite edge word starting at a vertex. At the i-th vertex with more than
/// one outgoing edge the walk takes the first or second edge according to
/// bit i of the Thue-Morse sequence. The generator is only constructible from
/// vertices that reach neither a sink nor a cycle without exits; under that
/// condition branch points recur forever and an eventually periodic word
/// would force the Thue-Morse sequence to be eventually periodic, so the word
/// is aperiodic by construction.
class ContinuousGenerator {
public:
    static constexpr const char* kThueMorse = "thue-morse";

    static std::shared_ptr<const ContinuousGenerator> create(GraphPtr graph, VertexId start,
                                                             std::string strategy = kThueMorse);
    /// No sink and no cycle without exits is reachable from v.
    static bool applicable(const Graph& g, VertexId v);

    const Graph& graph() const noexcept { return *graph_; }
    const GraphPtr& graph_ptr() const noexcept { return graph_; }
    VertexId start() const noexcept { return start_; }
    const std::string& strategy() const noexcept { return strategy_; }

    /// Letters w[from, from + count). Pure: recomputed from the start.
    std::vector<EdgeId> letters(std::size_t from, std::size_t count) const;
    /// s(w[offset]).
    VertexId vertex_at(std::size_t offset) const;

    static bool thue_morse_bit(std::size_t i);

private:
    ContinuousGenerator(GraphPtr graph, VertexId start, std::string strategy)
        : graph_(std::move(graph)), start_(start), strategy_(std::move(strategy)) {}

    GraphPtr graph_;
    VertexId start_;
    std::string strategy_;
};

using GeneratorPtr = std::shared_ptr<const ContinuousGenerator>;

/// (alpha, lambda) with alpha lambda lambda ... the trail and l(alpha) +
/// l(lambda) minimal.
struct Seed {
    Path alpha;
    Path lambda;
    friend bool operator==(const Seed&, const Seed&) = default;
};

/// A trail: a finite path ending in a sink, an eventually periodic infinite
/// path stored by its minimal seed, or a continuous word
/// `prefix . w[offset...]` of a generator. All three are kept in canonical
/// form, so structural equality is trail equality except between continuous
/// trails of different generators (see trails_equal).
class Trail {
public:
    enum class Kind { Finite, Periodic, Continuous };

    static Trail finite(const Graph& g, Path path);
    /// `period` must be closed at r(head). The stored seed is minimal.
    static Trail periodic(const Graph& g, Path head, Path period);
    static Trail continuous(GeneratorPtr gen);
    static Trail continuous(GeneratorPtr gen, Path prefix, std::size_t offset);

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    bool is_periodic() const noexcept { return kind_ == Kind::Periodic; }
    bool is_continuous() const noexcept { return kind_ == Kind::Continuous; }
    VertexId source() const noexcept { return path_.source(); }

    /// Finite: the path. Periodic: the seed head. Continuous: the prefix.
    const Path& path() const noexcept { return path_; }
    /// Periodic only.
    const Path& period() const noexcept { return period_; }
    const GeneratorPtr& generator() const noexcept { return gen_; }
    std::size_t offset() const noexcept { return offset_; }

    /// The first min(n, length) edges.
    std::vector<EdgeId> letters(std::size_t n) const;

    friend std::strong_ordering operator<=>(const Trail& a, const Trail& b);
    friend bool operator==(const Trail& a, const Trail& b) { return (a <=> b) == 0; }

private:
    Trail() = default;

    Kind kind_ = Kind::Finite;
    Path path_;
    Path period_;
    GeneratorPtr gen_;
    std::size_t offset_ = 0;
};

/// Prefix agreement bound for comparisons between continuous trails of
/// different generators.
inline constexpr std::size_t kContinuousCompareBound = 32;

/// Exact equality, except that continuous trails from distinct generators
/// whose first `bound` letters agree raise UndecidedError.
bool trails_equal(const Trail& a, const Trail& b, std::size_t bound = kContinuousCompareBound);

/// The head of length n.
Path head(const Graph& g, const Trail& t, std::size_t n);
/// mu <= tau: mu is some head of tau.
bool is_prefix(const Graph& g, const Path& mu, const Trail& t);
/// tau' with tau = mu tau', if mu <= tau.
std::optional<Trail> strip_prefix(const Graph& g, const Path& mu, const Trail& t);
/// mu tau; requires r(mu) = s(tau).
Trail prepend(const Graph& g, const Path& mu, const Trail& t);

Seed seed(const Trail& t);

enum class TrailClass { Finite, DiscretePeriodic, Continuous, NotEssentiallyAperiodic };
std::string to_string(TrailClass c);

TrailClass classify(const Graph& g, const Trail& t);
bool is_essentially_aperiodic(const Graph& g, const Trail& t);
bool is_discrete(const Graph& g, const Trail& t);
/// The trail itself if finite, the seed head if periodic.
Path essential_head(const Graph& g, const Trail& t);

/// Finite trails of length <= max_head_len, then periodic trails whose
/// distinguished head has length <= max_head_len.
std::vector<Trail> enumerate_discrete(const Graph& g, std::size_t max_head_len);

/// An essentially aperiodic trail starting at v: finite if a sink is
/// reachable, else periodic if a cycle without exits is reachable, else
/// continuous.
Trail find_trail_from(const GraphPtr& g, VertexId v);

/// [tau_(0) tau_(0)*, ..., tau_(N) tau_(N)*] with repeats collapsed.
std::vector<Monomial> diagonal_chain(const Graph& g, const Trail& t, std::size_t n);

/// `finite:g`, `periodic:g|c`, `cont:thue-morse@v`, and the shifted form
/// `cont:<prefix>/thue-morse@v+<offset>` that printing produces.
Trail parse_trail(const GraphPtr& g, std::string_view text);
std::string format_trail(const Graph& g, const Trail& t);

} // namespace lpa
