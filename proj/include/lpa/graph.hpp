#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lpa {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// A finite path: either a vertex (length 0) or a nonempty edge sequence
/// e1...en with r(ei) = s(ei+1). Construction through Graph::make_path
/// checks the chain condition; the combinators below preserve it.
class Path {
public:
    Path() = default;
    Path(VertexId source, VertexId range, std::vector<EdgeId> edges)
        : source_(source), range_(range), edges_(std::move(edges)) {}

    static Path vertex(VertexId v) { return Path(v, v, {}); }

    VertexId source() const noexcept { return source_; }
    VertexId range() const noexcept { return range_; }
    std::size_t length() const noexcept { return edges_.size(); }
    bool is_vertex() const noexcept { return edges_.empty(); }
    const std::vector<EdgeId>& edges() const noexcept { return edges_; }
    EdgeId last_edge() const { return edges_.back(); }

    /// Ordered by length, then source, then edge ids.
    friend std::strong_ordering operator<=>(const Path& a, const Path& b);
    friend bool operator==(const Path& a, const Path& b) {
        return a.source_ == b.source_ && a.edges_ == b.edges_;
    }

private:
    VertexId source_ = 0;
    VertexId range_ = 0;
    std::vector<EdgeId> edges_;
};

/// a <= b in the prefix order: b = a a' for some path a'.
bool is_prefix(const Path& a, const Path& b);
/// The a' with b = a a', if a <= b.
std::optional<Path> strip_prefix(const Path& a, const Path& b);
/// a b; requires r(a) = s(b).
Path concat(const Path& a, const Path& b);
/// Drops the last edge of a nonempty path; needs the graph for the new range.
class Graph;
Path drop_last(const Graph& g, const Path& p);

struct EdgeSpec {
    std::string name;
    std::string source;
    std::string range;
};

/// Finite directed graph E = (E0, E1, r, s). Identifiers are sorted on
/// construction, so vertex and edge ids follow lexicographic name order.
class Graph {
public:
    /// Validates identifiers and endpoints. Names may contain the reserved
    /// prime character only when `allow_primes` is set (used by build_F).
    static Graph create(std::vector<std::string> vertices, std::vector<EdgeSpec> edges,
                        bool allow_primes = false);

    std::size_t vertex_count() const noexcept { return vertex_names_.size(); }
    std::size_t edge_count() const noexcept { return edge_names_.size(); }
    const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
    const std::string& edge_name(EdgeId e) const { return edge_names_.at(e); }
    VertexId source(EdgeId e) const { return source_.at(e); }
    VertexId range(EdgeId e) const { return range_.at(e); }
    std::span<const EdgeId> out_edges(VertexId v) const { return out_.at(v); }
    std::span<const EdgeId> in_edges(VertexId v) const { return in_.at(v); }
    std::optional<VertexId> find_vertex(std::string_view name) const;
    std::optional<EdgeId> find_edge(std::string_view name) const;

    bool is_sink(VertexId v) const { return out_.at(v).empty(); }
    bool is_regular(VertexId v) const { return !out_.at(v).empty(); }

    /// Path from an edge sequence; throws DomainError if the chain breaks.
    Path make_path(const std::vector<EdgeId>& edges) const;
    Path edge_path(EdgeId e) const { return Path(source(e), range(e), {e}); }
    /// Appends an edge; requires r(p) = s(e).
    Path extend(const Path& p, EdgeId e) const;

    /// `v` for a vertex, `e.f.g` otherwise.
    std::string format_path(const Path& p) const;
    /// Inverse of format_path; also accepts a single vertex or edge name.
    Path parse_path(std::string_view text) const;

    /// Paths of length exactly k starting at v, in path order.
    std::vector<Path> paths_from(VertexId v, std::size_t k) const;
    /// All paths of length <= max_len, in path order.
    std::vector<Path> all_paths(std::size_t max_len) const;

    friend bool operator==(const Graph& a, const Graph& b) = default;

private:
    std::vector<std::string> vertex_names_;
    std::vector<std::string> edge_names_;
    std::vector<VertexId> source_;
    std::vector<VertexId> range_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
};

using GraphPtr = std::shared_ptr<const Graph>;

/// Parses the text graph format:
///
///     vertices: v1 v2 ...
///     edges: e1: v1 -> v2
///            e2: v2 -> v2
///
/// Lines after a section header continue that section. `#` starts a comment.
Graph parse_graph(std::string_view text);
std::string format_graph(const Graph& g);

struct VertexClasses {
    std::set<VertexId> sinks;
    std::set<VertexId> regular;
};
VertexClasses vertex_classes(const Graph& g);

struct CycleInfo {
    Path cycle;
    /// (index into the cycle, exit edge)
    std::vector<std::pair<std::size_t, EdgeId>> exits;
};

/// Every cycle once, based at its least vertex id.
std::vector<CycleInfo> cycles(const Graph& g);
/// Every cycle has an exit.
bool condition_L(const Graph& g);
/// Cycles without exits, based at their least vertex id. These are pairwise
/// vertex-disjoint since each of their vertices emits exactly one edge.
std::vector<Path> exit_free_cycles(const Graph& g);
/// The exit-free cycle through v rotated to be based at v, if v lies on one.
std::optional<Path> exit_free_cycle_at(const Graph& g, VertexId v);
/// Nonempty closed path with no exits: every source vertex along it emits
/// exactly one edge.
bool is_closed_without_exits(const Graph& g, const Path& p);

struct DistinguishedPath {
    Path alpha;
    Path lambda;
    friend bool operator==(const DistinguishedPath&, const DistinguishedPath&) = default;
};

/// Pairs (alpha, lambda_alpha) with l(alpha) <= max_len, lambda_alpha the
/// exit-free cycle at r(alpha) and no edge of alpha starting on it.
std::vector<DistinguishedPath> distinguished_paths(const Graph& g, std::size_t max_len);
bool is_distinguished(const Graph& g, const Path& alpha);

/// The graph F(E): one primed sink v' per regular v, one primed edge e' per
/// edge with regular range, s(e') = s(e), r(e') = r(e)'.
Graph build_F(const Graph& g);

struct ShapeComponent {
    VertexId vertex;
    std::optional<EdgeId> loop;
};

struct CommutativeShape {
    bool commutative = false;
    std::vector<ShapeComponent> components;
    /// Violating edge and explanation when non-commutative.
    std::optional<EdgeId> witness_edge;
    std::string witness;
};

CommutativeShape shape_classify(const Graph& g);

} // namespace lpa
