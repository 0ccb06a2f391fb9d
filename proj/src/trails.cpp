#include "lpa/trails.hpp"

#include "lpa/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>

namespace lpa {

// ---------------------------------------------------------------------------
// Continuous generator

bool ContinuousGenerator::thue_morse_bit(std::size_t i) { return std::popcount(i) % 2 == 1; }

bool ContinuousGenerator::applicable(const Graph& g, VertexId v) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<VertexId> queue{v};
    seen[v] = true;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        if (g.is_sink(u) || exit_free_cycle_at(g, u))
            return false;
        for (EdgeId e : g.out_edges(u))
            if (!seen[g.range(e)]) {
                seen[g.range(e)] = true;
                queue.push_back(g.range(e));
            }
    }
    return true;
}

GeneratorPtr ContinuousGenerator::create(GraphPtr graph, VertexId start, std::string strategy) {
    if (strategy != kThueMorse)
        throw DomainError("unknown continuous trail strategy '" + strategy + "'");
    if (start >= graph->vertex_count())
        throw DomainError("vertex id out of range");
    if (!applicable(*graph, start))
        throw DomainError("no continuous " + strategy + " trail from " +
                          graph->vertex_name(start) +
                          ": a sink or a cycle without exits is reachable");
    return GeneratorPtr(new ContinuousGenerator(std::move(graph), start, std::move(strategy)));
}

std::vector<EdgeId> ContinuousGenerator::letters(std::size_t from, std::size_t count) const {
    std::vector<EdgeId> out;
    out.reserve(count);
    VertexId v = start_;
    std::size_t branch = 0;
    for (std::size_t i = 0; i < from + count; ++i) {
        auto out_v = graph_->out_edges(v);
        EdgeId e = out_v.front();
        if (out_v.size() > 1)
            e = out_v[thue_morse_bit(branch++) ? 1 : 0];
        if (i >= from)
            out.push_back(e);
        v = graph_->range(e);
    }
    return out;
}

VertexId ContinuousGenerator::vertex_at(std::size_t offset) const {
    if (offset == 0)
        return start_;
    return graph_->range(letters(offset - 1, 1).front());
}

// ---------------------------------------------------------------------------
// Trail construction

namespace {

/// Rotation of a closed path so it starts k edges later.
Path rotate(const Graph& g, const Path& cycle, std::size_t k) {
    const auto& e = cycle.edges();
    k %= e.size();
    if (k == 0)
        return cycle;
    std::vector<EdgeId> out(e.begin() + static_cast<std::ptrdiff_t>(k), e.end());
    out.insert(out.end(), e.begin(), e.begin() + static_cast<std::ptrdiff_t>(k));
    return g.make_path(out);
}

Path primitive_root(const Graph& g, const Path& p) {
    const auto& e = p.edges();
    std::size_t n = e.size();
    for (std::size_t k = 1; k < n; ++k) {
        if (n % k)
            continue;
        bool periodic = true;
        for (std::size_t i = k; i < n && periodic; ++i)
            periodic = e[i] == e[i - k];
        if (periodic)
            return g.make_path(std::vector<EdgeId>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(k)));
    }
    return p;
}

Path prefix_of(const Graph& g, VertexId source, const std::vector<EdgeId>& letters) {
    return letters.empty() ? Path::vertex(source) : g.make_path(letters);
}

} // namespace

Trail Trail::finite(const Graph& g, Path path) {
    if (!g.is_sink(path.range()))
        throw DomainError("finite trail " + g.format_path(path) + " does not end in a sink");
    Trail t;
    t.kind_ = Kind::Finite;
    t.path_ = std::move(path);
    return t;
}

Trail Trail::periodic(const Graph& g, Path head, Path period) {
    if (period.is_vertex() || period.source() != period.range() ||
        period.source() != head.range())
        throw DomainError("period must be a nonempty closed path based at r(head)");
    Path lambda = primitive_root(g, period);
    while (!head.is_vertex() && head.last_edge() == lambda.last_edge()) {
        head = drop_last(g, head);
        lambda = rotate(g, lambda, lambda.length() - 1);
    }
    Trail t;
    t.kind_ = Kind::Periodic;
    t.path_ = std::move(head);
    t.period_ = std::move(lambda);
    return t;
}

Trail Trail::continuous(GeneratorPtr gen) {
    VertexId v = gen->start();
    return continuous(std::move(gen), Path::vertex(v), 0);
}

Trail Trail::continuous(GeneratorPtr gen, Path prefix, std::size_t offset) {
    const Graph& g = gen->graph();
    if (prefix.range() != gen->vertex_at(offset))
        throw DomainError("continuous trail prefix does not meet the generator word");
    // absorb prefix letters that coincide with the word just before offset
    while (!prefix.is_vertex() && offset > 0 &&
           prefix.last_edge() == gen->letters(offset - 1, 1).front()) {
        prefix = drop_last(g, prefix);
        --offset;
    }
    Trail t;
    t.kind_ = Kind::Continuous;
    t.path_ = std::move(prefix);
    t.gen_ = std::move(gen);
    t.offset_ = offset;
    return t;
}

std::vector<EdgeId> Trail::letters(std::size_t n) const {
    std::vector<EdgeId> out;
    const auto& p = path_.edges();
    for (std::size_t i = 0; i < n && i < p.size(); ++i)
        out.push_back(p[i]);
    if (out.size() == n || kind_ == Kind::Finite)
        return out;
    std::size_t missing = n - out.size();
    if (kind_ == Kind::Periodic) {
        const auto& c = period_.edges();
        for (std::size_t i = 0; i < missing; ++i)
            out.push_back(c[i % c.size()]);
    } else {
        auto tail = gen_->letters(offset_, missing);
        out.insert(out.end(), tail.begin(), tail.end());
    }
    return out;
}

std::strong_ordering operator<=>(const Trail& a, const Trail& b) {
    if (auto c = static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_); c != 0)
        return c;
    if (a.kind_ == Trail::Kind::Continuous) {
        if (auto c = a.gen_->start() <=> b.gen_->start(); c != 0)
            return c;
        if (auto c = a.gen_->strategy() <=> b.gen_->strategy(); c != 0)
            return c;
        if (auto c = a.offset_ <=> b.offset_; c != 0)
            return c;
    }
    if (auto c = a.path_ <=> b.path_; c != 0)
        return c;
    return a.period_ <=> b.period_;
}

bool trails_equal(const Trail& a, const Trail& b, std::size_t bound) {
    bool cross_generator = a.is_continuous() && b.is_continuous() &&
                           (a.generator()->start() != b.generator()->start() ||
                            a.generator()->strategy() != b.generator()->strategy());
    if (!cross_generator)
        return a == b;
    if (a.source() != b.source() || a.letters(bound) != b.letters(bound))
        return false;
    throw UndecidedError("continuous trails from different generators agree on their first " +
                         std::to_string(bound) + " edges");
}

// ---------------------------------------------------------------------------
// Heads and prefixes

Path head(const Graph& g, const Trail& t, std::size_t n) {
    return prefix_of(g, t.source(), t.letters(n));
}

bool is_prefix(const Graph& g, const Path& mu, const Trail& t) {
    (void)g;
    if (mu.source() != t.source())
        return false;
    return t.letters(mu.length()) == mu.edges();
}

std::optional<Trail> strip_prefix(const Graph& g, const Path& mu, const Trail& t) {
    if (!is_prefix(g, mu, t))
        return std::nullopt;
    std::size_t k = mu.length();
    switch (t.kind()) {
    case Trail::Kind::Finite:
        return Trail::finite(g, *strip_prefix(mu, t.path()));
    case Trail::Kind::Periodic: {
        if (k <= t.path().length())
            return Trail::periodic(g, *strip_prefix(mu, t.path()), t.period());
        std::size_t shift = (k - t.path().length()) % t.period().length();
        Path lambda = rotate(g, t.period(), shift);
        return Trail::periodic(g, Path::vertex(lambda.source()), lambda);
    }
    case Trail::Kind::Continuous: {
        if (k <= t.path().length())
            return Trail::continuous(t.generator(), *strip_prefix(mu, t.path()), t.offset());
        std::size_t offset = t.offset() + (k - t.path().length());
        return Trail::continuous(t.generator(), Path::vertex(t.generator()->vertex_at(offset)),
                                 offset);
    }
    }
    return std::nullopt;
}

Trail prepend(const Graph& g, const Path& mu, const Trail& t) {
    if (mu.range() != t.source())
        throw DomainError("cannot prepend " + g.format_path(mu) + ": r(mu) != s(tau)");
    switch (t.kind()) {
    case Trail::Kind::Finite: return Trail::finite(g, concat(mu, t.path()));
    case Trail::Kind::Periodic: return Trail::periodic(g, concat(mu, t.path()), t.period());
    case Trail::Kind::Continuous:
        return Trail::continuous(t.generator(), concat(mu, t.path()), t.offset());
    }
    return t;
}

Seed seed(const Trail& t) {
    if (!t.is_periodic())
        throw DomainError("seed is defined for periodic trails only");
    return Seed{t.path(), t.period()};
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(TrailClass c) {
    switch (c) {
    case TrailClass::Finite: return "finite";
    case TrailClass::DiscretePeriodic: return "discrete-periodic";
    case TrailClass::Continuous: return "continuous";
    case TrailClass::NotEssentiallyAperiodic: return "not-essentially-aperiodic";
    }
    return "?";
}

TrailClass classify(const Graph& g, const Trail& t) {
    switch (t.kind()) {
    case Trail::Kind::Finite: return TrailClass::Finite;
    case Trail::Kind::Periodic:
        return is_closed_without_exits(g, t.period()) ? TrailClass::DiscretePeriodic
                                                      : TrailClass::NotEssentiallyAperiodic;
    case Trail::Kind::Continuous: return TrailClass::Continuous;
    }
    return TrailClass::NotEssentiallyAperiodic;
}

bool is_essentially_aperiodic(const Graph& g, const Trail& t) {
    return classify(g, t) != TrailClass::NotEssentiallyAperiodic;
}

bool is_discrete(const Graph& g, const Trail& t) {
    auto c = classify(g, t);
    return c == TrailClass::Finite || c == TrailClass::DiscretePeriodic;
}

Path essential_head(const Graph& g, const Trail& t) {
    switch (classify(g, t)) {
    case TrailClass::Finite:
    case TrailClass::DiscretePeriodic: return t.path();
    case TrailClass::Continuous:
        throw DomainError("continuous trails have no essential head");
    case TrailClass::NotEssentiallyAperiodic:
        throw DomainError("trail is not essentially aperiodic");
    }
    return t.path();
}

// ---------------------------------------------------------------------------
// Enumeration and existence

std::vector<Trail> enumerate_discrete(const Graph& g, std::size_t max_head_len) {
    std::vector<Trail> out;
    for (const Path& p : g.all_paths(max_head_len))
        if (g.is_sink(p.range()))
            out.push_back(Trail::finite(g, p));
    for (auto& d : distinguished_paths(g, max_head_len))
        out.push_back(Trail::periodic(g, d.alpha, d.lambda));
    return out;
}

Trail find_trail_from(const GraphPtr& gp, VertexId v) {
    const Graph& g = *gp;
    // BFS over edges in id order gives the shortest, then least, path.
    std::vector<std::optional<Path>> reach(g.vertex_count());
    std::deque<VertexId> queue{v};
    reach[v] = Path::vertex(v);
    std::vector<VertexId> order;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        order.push_back(u);
        for (EdgeId e : g.out_edges(u)) {
            VertexId w = g.range(e);
            if (!reach[w]) {
                reach[w] = g.extend(*reach[u], e);
                queue.push_back(w);
            }
        }
    }
    for (VertexId u : order)
        if (g.is_sink(u))
            return Trail::finite(g, *reach[u]);
    for (VertexId u : order)
        if (auto lambda = exit_free_cycle_at(g, u))
            return Trail::periodic(g, *reach[u], *lambda);
    return Trail::continuous(ContinuousGenerator::create(gp, v));
}

std::vector<Monomial> diagonal_chain(const Graph& g, const Trail& t, std::size_t n) {
    std::vector<Monomial> out;
    for (std::size_t i = 0; i <= n; ++i) {
        Path p = head(g, t, i);
        if (!out.empty() && out.back().alpha == p)
            continue;
        out.push_back(Monomial{p, p});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Literals

Trail parse_trail(const GraphPtr& gp, std::string_view text) {
    const Graph& g = *gp;
    auto fail = [&](const std::string& why) -> ParseError {
        return ParseError("bad trail literal '" + std::string(text) + "': " + why);
    };
    if (text.starts_with("finite:"))
        return Trail::finite(g, g.parse_path(text.substr(7)));
    if (text.starts_with("periodic:")) {
        auto body = text.substr(9);
        auto bar = body.find('|');
        if (bar == std::string_view::npos)
            throw fail("expected head|period");
        Path h = g.parse_path(body.substr(0, bar));
        Path p = g.parse_path(body.substr(bar + 1));
        return Trail::periodic(g, h, p);
    }
    if (text.starts_with("cont:")) {
        auto body = text.substr(5);
        std::optional<Path> prefix;
        if (auto slash = body.find('/'); slash != std::string_view::npos) {
            prefix = g.parse_path(body.substr(0, slash));
            body = body.substr(slash + 1);
        }
        auto at = body.find('@');
        if (at == std::string_view::npos)
            throw fail("expected <strategy>@<vertex>");
        std::string strategy(body.substr(0, at));
        auto rest = body.substr(at + 1);
        std::size_t offset = 0;
        if (auto plus = rest.find('+'); plus != std::string_view::npos) {
            try {
                offset = std::stoul(std::string(rest.substr(plus + 1)));
            } catch (const std::exception&) {
                throw fail("bad offset");
            }
            rest = rest.substr(0, plus);
        }
        auto v = g.find_vertex(rest);
        if (!v)
            throw fail("unknown vertex '" + std::string(rest) + "'");
        auto gen = ContinuousGenerator::create(gp, *v, strategy);
        if (!prefix)
            prefix = Path::vertex(gen->vertex_at(offset));
        return Trail::continuous(gen, *prefix, offset);
    }
    throw fail("expected finite:, periodic: or cont:");
}

std::string format_trail(const Graph& g, const Trail& t) {
    switch (t.kind()) {
    case Trail::Kind::Finite: return "finite:" + g.format_path(t.path());
    case Trail::Kind::Periodic:
        return "periodic:" + g.format_path(t.path()) + "|" + g.format_path(t.period());
    case Trail::Kind::Continuous: {
        std::string out = "cont:";
        bool shifted = !t.path().is_vertex() || t.offset() != 0;
        if (shifted)
            out += g.format_path(t.path()) + "/";
        out += t.generator()->strategy() + "@" + g.vertex_name(t.generator()->start());
        if (t.offset() != 0)
            out += "+" + std::to_string(t.offset());
        return out;
    }
    }
    return "?";
}

} // namespace lpa
