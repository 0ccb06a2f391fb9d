#include "lpa/graph.hpp"

#include "lpa/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace lpa {

std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.length() <=> b.length(); c != 0)
        return c;
    if (auto c = a.source_ <=> b.source_; c != 0)
        return c;
    return a.edges_ <=> b.edges_;
}

bool is_prefix(const Path& a, const Path& b) {
    if (a.source() != b.source() || a.length() > b.length())
        return false;
    return std::equal(a.edges().begin(), a.edges().end(), b.edges().begin());
}

std::optional<Path> strip_prefix(const Path& a, const Path& b) {
    if (!is_prefix(a, b))
        return std::nullopt;
    std::vector<EdgeId> rest(b.edges().begin() + static_cast<std::ptrdiff_t>(a.length()),
                             b.edges().end());
    return Path(a.range(), b.range(), std::move(rest));
}

Path concat(const Path& a, const Path& b) {
    if (a.range() != b.source())
        throw DomainError("concatenation of paths with r(a) != s(b)");
    if (a.is_vertex())
        return b;
    std::vector<EdgeId> edges = a.edges();
    edges.insert(edges.end(), b.edges().begin(), b.edges().end());
    return Path(a.source(), b.range(), std::move(edges));
}

Path drop_last(const Graph& g, const Path& p) {
    if (p.is_vertex())
        throw DomainError("cannot drop an edge from a vertex");
    std::vector<EdgeId> edges(p.edges().begin(), p.edges().end() - 1);
    return Path(p.source(), g.source(p.last_edge()), std::move(edges));
}

namespace {

bool valid_identifier(std::string_view name, bool allow_primes) {
    if (name.empty())
        return false;
    return std::all_of(name.begin(), name.end(), [&](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (allow_primes && c == '\'');
    });
}

} // namespace

Graph Graph::create(std::vector<std::string> vertices, std::vector<EdgeSpec> edges,
                    bool allow_primes) {
    for (auto& v : vertices)
        if (!valid_identifier(v, allow_primes))
            throw DomainError("invalid vertex identifier '" + v + "'");
    for (auto& e : edges)
        if (!valid_identifier(e.name, allow_primes))
            throw DomainError("invalid edge identifier '" + e.name + "'");

    std::sort(vertices.begin(), vertices.end());
    if (auto it = std::adjacent_find(vertices.begin(), vertices.end()); it != vertices.end())
        throw DomainError("duplicate vertex '" + *it + "'");
    std::sort(edges.begin(), edges.end(),
              [](const EdgeSpec& a, const EdgeSpec& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].name == edges[i - 1].name)
            throw DomainError("duplicate edge '" + edges[i].name + "'");

    Graph g;
    g.vertex_names_ = std::move(vertices);
    for (auto& e : edges)
        if (g.find_vertex(e.name))
            throw DomainError("identifier '" + e.name + "' names both a vertex and an edge");
    g.out_.resize(g.vertex_names_.size());
    g.in_.resize(g.vertex_names_.size());
    for (auto& e : edges) {
        auto s = g.find_vertex(e.source);
        if (!s)
            throw DomainError("edge '" + e.name + "' has undeclared source '" + e.source + "'");
        auto r = g.find_vertex(e.range);
        if (!r)
            throw DomainError("edge '" + e.name + "' has undeclared range '" + e.range + "'");
        auto id = static_cast<EdgeId>(g.edge_names_.size());
        g.edge_names_.push_back(e.name);
        g.source_.push_back(*s);
        g.range_.push_back(*r);
        g.out_[*s].push_back(id);
        g.in_[*r].push_back(id);
    }
    return g;
}

std::optional<VertexId> Graph::find_vertex(std::string_view name) const {
    auto it = std::lower_bound(vertex_names_.begin(), vertex_names_.end(), name);
    if (it == vertex_names_.end() || *it != name)
        return std::nullopt;
    return static_cast<VertexId>(it - vertex_names_.begin());
}

std::optional<EdgeId> Graph::find_edge(std::string_view name) const {
    auto it = std::lower_bound(edge_names_.begin(), edge_names_.end(), name);
    if (it == edge_names_.end() || *it != name)
        return std::nullopt;
    return static_cast<EdgeId>(it - edge_names_.begin());
}

Path Graph::make_path(const std::vector<EdgeId>& edges) const {
    if (edges.empty())
        throw DomainError("make_path needs at least one edge; use Path::vertex");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (range(edges[i]) != source(edges[i + 1]))
            throw DomainError("'" + edge_name(edges[i]) + "." + edge_name(edges[i + 1]) +
                              "' is not a path");
    return Path(source(edges.front()), range(edges.back()), edges);
}

Path Graph::extend(const Path& p, EdgeId e) const {
    if (p.range() != source(e))
        throw DomainError("cannot extend path by edge '" + edge_name(e) + "'");
    std::vector<EdgeId> edges = p.edges();
    edges.push_back(e);
    return Path(p.source(), range(e), std::move(edges));
}

std::string Graph::format_path(const Path& p) const {
    if (p.is_vertex())
        return vertex_name(p.source());
    std::string out;
    for (std::size_t i = 0; i < p.length(); ++i) {
        if (i)
            out += '.';
        out += edge_name(p.edges()[i]);
    }
    return out;
}

Path Graph::parse_path(std::string_view text) const {
    std::vector<EdgeId> edges;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t dot = text.find('.', pos);
        if (dot == std::string_view::npos)
            dot = text.size();
        std::string_view name = text.substr(pos, dot - pos);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front())))
            name.remove_prefix(1);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
            name.remove_suffix(1);
        if (auto v = find_vertex(name)) {
            if (pos != 0 || dot != text.size())
                throw ParseError("vertex '" + std::string(name) + "' inside a path");
            return Path::vertex(*v);
        }
        auto e = find_edge(name);
        if (!e)
            throw ParseError("unknown identifier '" + std::string(name) + "'");
        edges.push_back(*e);
        pos = dot + 1;
    }
    return make_path(edges);
}

std::vector<Path> Graph::paths_from(VertexId v, std::size_t k) const {
    std::vector<Path> frontier{Path::vertex(v)};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Path> next;
        for (auto& p : frontier)
            for (EdgeId e : out_edges(p.range()))
                next.push_back(extend(p, e));
        frontier = std::move(next);
    }
    std::sort(frontier.begin(), frontier.end());
    return frontier;
}

std::vector<Path> Graph::all_paths(std::size_t max_len) const {
    std::vector<Path> out;
    std::vector<Path> frontier;
    for (VertexId v = 0; v < vertex_count(); ++v)
        frontier.push_back(Path::vertex(v));
    for (std::size_t len = 0;; ++len) {
        out.insert(out.end(), frontier.begin(), frontier.end());
        if (len == max_len)
            break;
        std::vector<Path> next;
        for (auto& p : frontier)
            for (EdgeId e : out_edges(p.range()))
                next.push_back(extend(p, e));
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

} // namespace

Graph parse_graph(std::string_view text) {
    enum class Section { None, Vertices, Edges } section = Section::None;
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
    std::map<std::string, int> edge_line;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.starts_with("vertices:")) {
            section = Section::Vertices;
            line = trim(line.substr(9));
        } else if (line.starts_with("edges:")) {
            section = Section::Edges;
            line = trim(line.substr(6));
        }
        if (line.empty())
            continue;
        switch (section) {
        case Section::None:
            throw ParseError("expected 'vertices:' or 'edges:'", lineno);
        case Section::Vertices:
            for (auto& v : split_ws(line)) {
                if (!valid_identifier(v, false))
                    throw ParseError("invalid vertex identifier '" + v + "'", lineno);
                vertices.push_back(v);
            }
            break;
        case Section::Edges: {
            // one or more "name: a -> b" items separated by ',' or ';'
            std::size_t pos = 0;
            while (pos < line.size()) {
                std::size_t end = line.find_first_of(",;", pos);
                if (end == std::string_view::npos)
                    end = line.size();
                auto item = trim(line.substr(pos, end - pos));
                pos = end + 1;
                if (item.empty())
                    continue;
                auto colon = item.find(':');
                auto arrow = item.find("->");
                if (colon == std::string_view::npos || arrow == std::string_view::npos ||
                    arrow < colon)
                    throw ParseError("expected 'name: source -> range', got '" +
                                         std::string(item) + "'",
                                     lineno);
                EdgeSpec spec{std::string(trim(item.substr(0, colon))),
                              std::string(trim(item.substr(colon + 1, arrow - colon - 1))),
                              std::string(trim(item.substr(arrow + 2)))};
                for (auto* id : {&spec.name, &spec.source, &spec.range})
                    if (!valid_identifier(*id, false))
                        throw ParseError("invalid identifier '" + *id + "'", lineno);
                edge_line[spec.name] = lineno;
                edges.push_back(std::move(spec));
            }
            break;
        }
        }
    }

    try {
        return Graph::create(std::move(vertices), std::move(edges));
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

std::string format_graph(const Graph& g) {
    std::ostringstream os;
    os << "vertices:";
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        os << ' ' << g.vertex_name(v);
    os << "\nedges:";
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        os << (e ? "\n       " : " ") << g.edge_name(e) << ": " << g.vertex_name(g.source(e))
           << " -> " << g.vertex_name(g.range(e));
    os << '\n';
    return os.str();
}

VertexClasses vertex_classes(const Graph& g) {
    VertexClasses out;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        (g.is_sink(v) ? out.sinks : out.regular).insert(v);
    return out;
}

std::vector<CycleInfo> cycles(const Graph& g) {
    std::vector<CycleInfo> out;
    // DFS from each base vertex through strictly larger vertices.
    for (VertexId base = 0; base < g.vertex_count(); ++base) {
        std::vector<EdgeId> stack;
        std::vector<bool> on_path(g.vertex_count(), false);
        std::function<void(VertexId)> dfs = [&](VertexId v) {
            on_path[v] = true;
            for (EdgeId e : g.out_edges(v)) {
                VertexId w = g.range(e);
                stack.push_back(e);
                if (w == base) {
                    CycleInfo info{g.make_path(stack), {}};
                    for (std::size_t i = 0; i < stack.size(); ++i)
                        for (EdgeId f : g.out_edges(g.source(stack[i])))
                            if (f != stack[i])
                                info.exits.emplace_back(i, f);
                    out.push_back(std::move(info));
                } else if (w > base && !on_path[w]) {
                    dfs(w);
                }
                stack.pop_back();
            }
            on_path[v] = false;
        };
        dfs(base);
    }
    std::sort(out.begin(), out.end(),
              [](const CycleInfo& a, const CycleInfo& b) { return a.cycle < b.cycle; });
    return out;
}

std::optional<Path> exit_free_cycle_at(const Graph& g, VertexId v) {
    std::vector<EdgeId> edges;
    VertexId cur = v;
    for (std::size_t step = 0; step < g.vertex_count(); ++step) {
        if (g.out_edges(cur).size() != 1)
            return std::nullopt;
        EdgeId e = g.out_edges(cur).front();
        edges.push_back(e);
        cur = g.range(e);
        if (cur == v)
            return g.make_path(edges);
    }
    return std::nullopt;
}

std::vector<Path> exit_free_cycles(const Graph& g) {
    std::vector<Path> out;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto c = exit_free_cycle_at(g, v);
        if (!c)
            continue;
        // keep only the rotation based at the least vertex
        bool least = true;
        for (EdgeId e : c->edges())
            least = least && g.source(e) >= v;
        if (least)
            out.push_back(*c);
    }
    return out;
}

bool condition_L(const Graph& g) { return exit_free_cycles(g).empty(); }

bool is_closed_without_exits(const Graph& g, const Path& p) {
    if (p.is_vertex() || p.source() != p.range())
        return false;
    return std::all_of(p.edges().begin(), p.edges().end(),
                       [&](EdgeId e) { return g.out_edges(g.source(e)).size() == 1; });
}

std::vector<DistinguishedPath> distinguished_paths(const Graph& g, std::size_t max_len) {
    std::vector<DistinguishedPath> out;
    for (const Path& cycle : exit_free_cycles(g)) {
        std::set<VertexId> on_cycle;
        for (EdgeId e : cycle.edges())
            on_cycle.insert(g.source(e));
        for (VertexId target : on_cycle) {
            Path lambda = *exit_free_cycle_at(g, target);
            // grow alpha backwards from r(alpha) = target
            std::vector<Path> frontier{Path::vertex(target)};
            for (std::size_t len = 0;; ++len) {
                for (auto& a : frontier)
                    out.push_back({a, lambda});
                if (len == max_len)
                    break;
                std::vector<Path> next;
                for (auto& a : frontier)
                    for (EdgeId e : g.in_edges(a.source()))
                        if (!on_cycle.contains(g.source(e)))
                            next.push_back(concat(g.edge_path(e), a));
                frontier = std::move(next);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const DistinguishedPath& a, const DistinguishedPath& b) {
        return a.alpha < b.alpha;
    });
    return out;
}

bool is_distinguished(const Graph& g, const Path& alpha) {
    auto lambda = exit_free_cycle_at(g, alpha.range());
    if (!lambda)
        return false;
    for (EdgeId e : alpha.edges())
        for (EdgeId f : lambda->edges())
            if (g.source(e) == g.source(f))
                return false;
    return true;
}

Graph build_F(const Graph& g) {
    std::vector<std::string> vertices;
    std::vector<EdgeSpec> edges;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        vertices.push_back(g.vertex_name(v));
        if (g.is_regular(v))
            vertices.push_back(g.vertex_name(v) + "'");
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& s = g.vertex_name(g.source(e));
        const auto& r = g.vertex_name(g.range(e));
        edges.push_back({g.edge_name(e), s, r});
        if (g.is_regular(g.range(e)))
            edges.push_back({g.edge_name(e) + "'", s, r + "'"});
    }
    return Graph::create(std::move(vertices), std::move(edges), true);
}

CommutativeShape shape_classify(const Graph& g) {
    CommutativeShape out;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (g.source(e) != g.range(e)) {
            out.witness_edge = e;
            out.witness = "edge " + g.edge_name(e) + " has s=" + g.vertex_name(g.source(e)) +
                          " but r=" + g.vertex_name(g.range(e));
            return out;
        }
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        auto out_e = g.out_edges(g.source(e));
        if (out_e.size() > 1) {
            out.witness_edge = out_e[1];
            out.witness = "edges " + g.edge_name(out_e[0]) + " and " + g.edge_name(out_e[1]) +
                          " share source " + g.vertex_name(g.source(e)) + " (s not injective)";
            return out;
        }
    }
    out.commutative = true;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto out_v = g.out_edges(v);
        out.components.push_back(
            {v, out_v.empty() ? std::nullopt : std::optional<EdgeId>(out_v.front())});
    }
    return out;
}

} // namespace lpa
