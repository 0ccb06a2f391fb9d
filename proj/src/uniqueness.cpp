#include "lpa/uniqueness.hpp"

#include "lpa/core.hpp"
#include "lpa/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace lpa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

/// Splits at commas outside brackets and parentheses.
std::vector<std::string_view> split_top(std::string_view s) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '[' || c == '(')
            ++depth;
        else if (c == ']' || c == ')')
            --depth;
        else if (c == ',' && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

std::string_view unbracket(std::string_view s, std::string_view what) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ParseError("expected a bracketed " + std::string(what) + ", got '" +
                         std::string(s) + "'");
    return s.substr(1, s.size() - 2);
}

} // namespace

// ---------------------------------------------------------------------------
// Matrix targets

TargetAlgebra::TargetAlgebra(Ring ring, std::size_t k) : ring_(std::move(ring)), k_(k) {
    if (k == 0)
        throw DomainError("target matrices must have size at least 1");
}

std::string TargetAlgebra::name() const {
    return "matrix " + std::to_string(k_) + " over " + ring_.name();
}

Matrix TargetAlgebra::zero() const { return Matrix{k_, std::vector<Scalar>(k_ * k_, ring_.zero())}; }

Matrix TargetAlgebra::identity() const { return scalar(ring_.one()); }

Matrix TargetAlgebra::scalar(const Scalar& c) const {
    Matrix m = zero();
    for (std::size_t i = 0; i < k_; ++i)
        m.at(i, i) = c;
    return m;
}

Matrix TargetAlgebra::add(const Matrix& a, const Matrix& b) const {
    Matrix m = a;
    for (std::size_t i = 0; i < m.entries.size(); ++i)
        m.entries[i] = ring_.add(a.entries[i], b.entries[i]);
    return m;
}

Matrix TargetAlgebra::sub(const Matrix& a, const Matrix& b) const {
    Matrix m = a;
    for (std::size_t i = 0; i < m.entries.size(); ++i)
        m.entries[i] = ring_.sub(a.entries[i], b.entries[i]);
    return m;
}

Matrix TargetAlgebra::mul(const Matrix& a, const Matrix& b) const {
    Matrix m = zero();
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t l = 0; l < k_; ++l) {
            const Scalar& x = a.at(i, l);
            if (ring_.is_zero(x))
                continue;
            for (std::size_t j = 0; j < k_; ++j)
                m.at(i, j) = ring_.add(m.at(i, j), ring_.mul(x, b.at(l, j)));
        }
    return m;
}

Matrix TargetAlgebra::scale(const Scalar& c, const Matrix& a) const {
    Matrix m = a;
    for (auto& e : m.entries)
        e = ring_.mul(c, e);
    return m;
}

Matrix TargetAlgebra::star(const Matrix& a) const {
    Matrix m = zero();
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < k_; ++j)
            m.at(i, j) = ring_.conjugate(a.at(j, i));
    return m;
}

bool TargetAlgebra::is_zero(const Matrix& a) const {
    return std::all_of(a.entries.begin(), a.entries.end(),
                       [&](const Scalar& e) { return ring_.is_zero(e); });
}

std::optional<int> TargetAlgebra::homogeneous_degree(const Matrix& a) const {
    if (!ring_.is_laurent())
        return 0;
    std::optional<int> deg;
    for (const auto& e : a.entries) {
        if (e.laurent.empty())
            continue;
        if (e.laurent.size() > 1)
            return std::nullopt;
        int k = e.laurent.front().first;
        if (deg && *deg != k)
            return std::nullopt;
        deg = k;
    }
    return deg.value_or(0);
}

Matrix TargetAlgebra::parse(std::string_view text) const {
    auto rows = split_top(unbracket(text, "matrix"));
    if (rows.size() != k_)
        throw ParseError("expected " + std::to_string(k_) + " rows, got " +
                         std::to_string(rows.size()));
    Matrix m = zero();
    for (std::size_t i = 0; i < k_; ++i) {
        auto cells = split_top(unbracket(rows[i], "row"));
        if (cells.size() != k_)
            throw ParseError("row " + std::to_string(i + 1) + " has " +
                             std::to_string(cells.size()) + " entries, expected " +
                             std::to_string(k_));
        for (std::size_t j = 0; j < k_; ++j)
            m.at(i, j) = ring_.parse_scalar(cells[j]);
    }
    return m;
}

std::string TargetAlgebra::format(const Matrix& a) const {
    std::string out = "[";
    for (std::size_t i = 0; i < k_; ++i) {
        out += i ? ",[" : "[";
        for (std::size_t j = 0; j < k_; ++j) {
            if (j)
                out += ',';
            out += ring_.format(a.at(i, j));
        }
        out += ']';
    }
    return out + "]";
}

// ---------------------------------------------------------------------------
// Systems

bool ring_maps_into(const Ring& r, const Ring& t) {
    const Ring& b = t.base();
    if (r == t || r == b || r.kind() == Ring::Kind::Integers)
        return true;
    return r.kind() == Ring::Kind::Modular && b.kind() == Ring::Kind::Modular &&
           r.modulus() % b.modulus() == 0;
}

Scalar CKSystem::embed(const Scalar& r) const {
    if (coeff_ring.is_laurent())
        return r;
    return target.ring().from_rational(r.value);
}

void set_coeff_ring(CKSystem& sys, const Ring& r) {
    if (r.is_laurent())
        throw DomainError("coefficient ring must be Z, Z/n or Q, got " + r.name());
    if (!ring_maps_into(r, sys.target.ring()))
        throw DomainError("no ring map from " + r.name() + " into the target ring " +
                          sys.target.ring().name());
    sys.coeff_ring = r;
}

namespace {

struct SystemLines {
    std::optional<std::string> graph_file;
    std::optional<std::pair<std::string, int>> ring;
    std::optional<std::pair<std::string, int>> target;
    std::vector<std::tuple<std::string, std::string, int>> assignments;
};

SystemLines read_system_lines(std::string_view text) {
    SystemLines out;
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
        if (line.starts_with("system:")) {
            out.graph_file = std::string(trim(line.substr(7)));
        } else if (line.starts_with("ring:")) {
            out.ring = {std::string(trim(line.substr(5))), lineno};
        } else if (line.starts_with("target:")) {
            out.target = {std::string(trim(line.substr(7))), lineno};
        } else if (line.starts_with("S ")) {
            auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("expected 'S <name> = <matrix>'", lineno);
            out.assignments.emplace_back(std::string(trim(line.substr(2, eq - 2))),
                                         std::string(trim(line.substr(eq + 1))), lineno);
        } else {
            throw ParseError("unrecognized line '" + std::string(line) + "'", lineno);
        }
    }
    return out;
}

CKSystem build_system(const SystemLines& lines, GraphPtr graph) {
    if (!lines.target)
        throw ParseError("missing 'target: matrix <k> over <ring>' line");
    auto [spec, lineno] = *lines.target;
    std::istringstream ts(spec);
    std::string word, over;
    std::size_t k = 0;
    if (!(ts >> word >> k >> over) || word != "matrix" || over != "over")
        throw ParseError("expected 'target: matrix <k> over <ring>'", lineno);
    std::string ring_text;
    std::getline(ts, ring_text);
    Ring t = [&] {
        try {
            return Ring::parse(trim(ring_text));
        } catch (const std::exception& e) {
            throw ParseError(e.what(), lineno);
        }
    }();
    if (k == 0)
        throw ParseError("matrix size must be positive", lineno);
    TargetAlgebra target(t, k);
    CKSystem sys{graph, t.base(), target,
                 std::vector<Matrix>(graph->vertex_count(), target.zero()),
                 std::vector<Matrix>(graph->edge_count(), target.zero())};
    if (lines.ring) {
        try {
            set_coeff_ring(sys, Ring::parse(lines.ring->first));
        } catch (const std::exception& e) {
            throw ParseError(e.what(), lines.ring->second);
        }
    }
    std::vector<bool> seen_v(graph->vertex_count()), seen_e(graph->edge_count());
    for (const auto& [name, value, line] : lines.assignments) {
        Matrix m;
        try {
            m = target.parse(value);
        } catch (const std::exception& e) {
            throw ParseError("S " + name + ": " + e.what(), line);
        }
        if (auto v = graph->find_vertex(name)) {
            if (seen_v[*v])
                throw ParseError("duplicate assignment for " + name, line);
            seen_v[*v] = true;
            sys.vertex_images[*v] = std::move(m);
        } else if (auto e = graph->find_edge(name)) {
            if (seen_e[*e])
                throw ParseError("duplicate assignment for " + name, line);
            seen_e[*e] = true;
            sys.edge_images[*e] = std::move(m);
        } else {
            throw ParseError("unknown vertex or edge '" + name + "'", line);
        }
    }
    return sys;
}

} // namespace

CKSystem parse_system(std::string_view text, const std::filesystem::path& base_dir, bool over_F) {
    SystemLines lines = read_system_lines(text);
    if (!lines.graph_file)
        throw ParseError("missing 'system: <graph-file>' line");
    std::filesystem::path file = base_dir / *lines.graph_file;
    std::ifstream in(file);
    if (!in)
        throw ParseError("cannot open graph file '" + file.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Graph g = parse_graph(buf.str());
    if (over_F)
        g = build_F(g);
    return build_system(lines, std::make_shared<const Graph>(std::move(g)));
}

CKSystem parse_system(std::string_view text, GraphPtr graph) {
    return build_system(read_system_lines(text), std::move(graph));
}

// ---------------------------------------------------------------------------
// Validation and evaluation

CKReport ck_validate(const CKSystem& sys) {
    const Graph& g = *sys.graph;
    const TargetAlgebra& t = sys.target;
    CKReport out;
    auto S = [&](VertexId v) -> const Matrix& { return sys.vertex_images[v]; };
    auto T = [&](EdgeId e) -> const Matrix& { return sys.edge_images[e]; };
    auto fail = [&](std::string msg) {
        out.valid = false;
        out.violations.push_back(std::move(msg));
    };

    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const auto& vn = g.vertex_name(v);
        if (!(t.mul(S(v), S(v)) == S(v)))
            fail("(1) S_" + vn + " S_" + vn + " != S_" + vn);
        for (VertexId w = 0; w < g.vertex_count(); ++w)
            if (w != v && !t.is_zero(t.mul(S(v), S(w))))
                fail("(1) S_" + vn + " S_" + g.vertex_name(w) + " != 0");
        if (!(t.star(S(v)) == S(v)))
            fail("(2) S_" + vn + "^* != S_" + vn);
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& en = g.edge_name(e);
        if (!(t.mul(S(g.source(e)), T(e)) == T(e)))
            fail("(3) S_" + g.vertex_name(g.source(e)) + " S_" + en + " != S_" + en);
        if (!(t.mul(T(e), S(g.range(e))) == T(e)))
            fail("(3) S_" + en + " S_" + g.vertex_name(g.range(e)) + " != S_" + en);
        Matrix es = t.star(T(e));
        for (EdgeId f = 0; f < g.edge_count(); ++f) {
            Matrix p = t.mul(es, T(f));
            if (f == e && !(p == S(g.range(e))))
                fail("(4) S_" + en + "^* S_" + en + " = " + t.format(p) + " != S_" +
                     g.vertex_name(g.range(e)));
            if (f != e && !t.is_zero(p))
                fail("(4) S_" + en + "^* S_" + g.edge_name(f) + " = " + t.format(p) + " != 0");
        }
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!g.is_regular(v))
            continue;
        Matrix sum = t.zero();
        for (EdgeId e : g.out_edges(v))
            sum = t.add(sum, t.mul(T(e), t.star(T(e))));
        if (!(sum == S(v)))
            fail("(5) sum of S_e S_e^* over s(e) = " + g.vertex_name(v) + " is " + t.format(sum) +
                 " != S_" + g.vertex_name(v));
    }
    return out;
}

Matrix path_image(const CKSystem& sys, const Path& p) {
    if (p.is_vertex())
        return sys.vertex_images[p.source()];
    Matrix m = sys.edge_images[p.edges().front()];
    for (std::size_t i = 1; i < p.length(); ++i)
        m = sys.target.mul(m, sys.edge_images[p.edges()[i]]);
    return m;
}

namespace {

void require_same_algebra(const CKSystem& sys, const Element& x) {
    if (!(x.graph() == *sys.graph))
        throw DomainError("element and system are over different graphs");
    if (!(x.ring() == sys.coeff_ring))
        throw DomainError("ring mismatch: element over " + x.ring().name() + ", system over " +
                          sys.coeff_ring.name());
}

Matrix evaluate(const CKSystem& sys, const Element& x) {
    const TargetAlgebra& t = sys.target;
    Matrix out = t.zero();
    for (const auto& [m, c] : normal_form(x).terms()) {
        Matrix term = t.mul(path_image(sys, m.alpha), t.star(path_image(sys, m.beta)));
        out = t.add(out, t.scale(sys.embed(c), term));
    }
    return out;
}

} // namespace

Matrix hom_apply(const CKSystem& sys, const Element& x) {
    require_same_algebra(sys, x);
    auto report = ck_validate(sys);
    if (!report.valid)
        throw DomainError("not a Cuntz-Krieger system: " + report.violations.front());
    return evaluate(sys, x);
}

// ---------------------------------------------------------------------------
// Reduction search

namespace {

/// mu^* a nu.
Element sandwich(const AlgebraPtr& alg, const Path& mu, const Element& a, const Path& nu) {
    Element left = mono(alg, Path::vertex(mu.range()), mu);
    Element right = mono(alg, nu, Path::vertex(nu.range()));
    return normal_form(mul(mul(left, a), right));
}

/// Reads b as r v or as a Laurent polynomial in the cycle without exits at v.
std::optional<ReductionCertificate> reduced_shape(const Element& b) {
    const Graph& g = b.graph();
    const Ring& r = b.ring();
    if (b.has_no_terms())
        return std::nullopt;
    if (b.size() == 1) {
        const auto& [m, c] = *b.terms().begin();
        if (m.alpha.is_vertex() && m.alpha == m.beta) {
            ReductionCertificate cert;
            cert.kind = ReductionCertificate::Kind::ScalarVertex;
            cert.r = c;
            cert.v = m.alpha.source();
            return cert;
        }
    }
    if (r.is_laurent())
        return std::nullopt;
    VertexId v = b.terms().begin()->first.alpha.source();
    auto lambda = exit_free_cycle_at(g, v);
    if (!lambda)
        return std::nullopt;
    std::vector<std::pair<int, Rational>> coeffs;
    for (const auto& [m, c] : b.terms()) {
        const Path* cyc = nullptr;
        int sign = 1;
        if (m.beta == Path::vertex(v)) {
            cyc = &m.alpha;
        } else if (m.alpha == Path::vertex(v)) {
            cyc = &m.beta;
            sign = -1;
        } else {
            return std::nullopt;
        }
        if (cyc->is_vertex()) {
            coeffs.emplace_back(0, c.value);
            continue;
        }
        if (cyc->source() != v || !is_closed_without_exits(g, *cyc) ||
            cyc->length() % lambda->length() != 0)
            return std::nullopt;
        coeffs.emplace_back(sign * static_cast<int>(cyc->length() / lambda->length()), c.value);
    }
    ReductionCertificate cert;
    cert.kind = ReductionCertificate::Kind::CyclePolynomial;
    cert.v = v;
    cert.lambda = *lambda;
    cert.p = Ring::laurent(r).make_laurent(std::move(coeffs));
    return cert;
}

} // namespace

std::optional<ReductionCertificate> reduce_search(const Element& a, std::size_t path_bound) {
    Element nf = normal_form(a);
    if (nf.has_no_terms())
        throw DomainError("reduction search needs a nonzero element");
    const AlgebraPtr& alg = a.algebra();
    std::vector<std::vector<Path>> by_length(path_bound + 1);
    for (const Path& p : alg->graph().all_paths(path_bound))
        by_length[p.length()].push_back(p);
    std::vector<Path> ordered;
    for (auto& group : by_length)
        ordered.insert(ordered.end(), group.begin(), group.end());

    for (std::size_t total = 0; total <= 2 * path_bound; ++total) {
        for (const Path& mu : ordered) {
            if (mu.length() > total || total - mu.length() > path_bound)
                continue;
            for (const Path& nu : by_length[total - mu.length()]) {
                auto cert = reduced_shape(sandwich(alg, mu, nf, nu));
                if (!cert)
                    continue;
                cert->mu = mu;
                cert->nu = nu;
                return cert;
            }
        }
    }
    return std::nullopt;
}

Element certificate_outcome(const AlgebraPtr& alg, const ReductionCertificate& cert) {
    if (cert.kind == ReductionCertificate::Kind::ScalarVertex)
        return vertex(alg, cert.v).scaled(cert.r);
    return gamma_iso(alg, cert.p, Path::vertex(cert.v));
}

bool replay(const ReductionCertificate& cert, const Element& a) {
    const AlgebraPtr& alg = a.algebra();
    Element outcome = certificate_outcome(alg, cert);
    return !is_zero(outcome) && eq(sandwich(alg, cert.mu, a, cert.nu), outcome);
}

std::string format_certificate(const Graph& g, const Ring& r, const ReductionCertificate& cert) {
    std::string out = "mu=" + g.format_path(cert.mu) + " nu=" + g.format_path(cert.nu) + " ";
    if (cert.kind == ReductionCertificate::Kind::ScalarVertex)
        return out + "scalar-vertex r=" + r.format(cert.r) + " v=" + g.vertex_name(cert.v);
    return out + "cycle-polynomial lambda=" + g.format_path(cert.lambda) +
           " p=" + Ring::laurent(r).format(cert.p);
}

// ---------------------------------------------------------------------------
// Uniqueness conditions

std::string to_string(UniquenessReport::Verdict v) {
    switch (v) {
    case UniquenessReport::Verdict::Injective: return "injective";
    case UniquenessReport::Verdict::NotInjective: return "not-injective";
    case UniquenessReport::Verdict::VerifiedAtBound: return "verified-at-bound";
    }
    return "?";
}

namespace {

using Row = std::map<std::pair<std::size_t, int>, Rational>;

/// Base-ring coefficients of a matrix keyed by (entry, exponent).
Row flatten(const TargetAlgebra& t, const Matrix& m) {
    Row out;
    for (std::size_t i = 0; i < m.entries.size(); ++i)
        for (const auto& [k, c] : t.ring().coefficients(m.entries[i]))
            if (c != 0)
                out[{i, k}] = c;
    return out;
}

/// Nonzero y over Q with sum_k y_k rows[k] = 0, if any.
std::optional<std::vector<Rational>> left_kernel_Q(const std::vector<Row>& rows) {
    std::map<std::pair<std::size_t, int>, std::size_t> col_index;
    for (const auto& r : rows)
        for (const auto& [key, _] : r)
            col_index.emplace(key, 0);
    std::size_t j = 0;
    for (auto& [_, idx] : col_index)
        idx = j++;
    // Solve A y = 0 with A[col][k] = rows[k][col].
    std::size_t n = rows.size(), m = col_index.size();
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n, Rational(0)));
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& [key, c] : rows[k])
            A[col_index[key]][k] = c;
    std::vector<std::optional<std::size_t>> pivot_row_of(n);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && A[p][c] == 0)
            ++p;
        if (p == m)
            continue;
        std::swap(A[p], A[r]);
        Rational inv = Rational(1) / A[r][c];
        for (auto& x : A[r])
            x *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || A[i][c] == 0)
                continue;
            Rational f = A[i][c];
            for (std::size_t l = 0; l < n; ++l)
                A[i][l] -= f * A[r][l];
        }
        pivot_row_of[c] = r++;
    }
    // Take the last free column so that minimal windows give a monic top term.
    for (std::size_t free = n; free-- > 0;) {
        if (pivot_row_of[free])
            continue;
        std::vector<Rational> y(n, Rational(0));
        y[free] = 1;
        for (std::size_t c = 0; c < n; ++c)
            if (pivot_row_of[c])
                y[c] = -A[*pivot_row_of[c]][free];
        return y;
    }
    return std::nullopt;
}

/// Nonzero y in (Z/q)^n with sum_k y_k rows[k] = 0 mod q, via a Smith
/// diagonalization that tracks the row operations.
std::optional<std::vector<Rational>> left_kernel_mod(const std::vector<Row>& rows,
                                                     const Integer& q) {
    std::map<std::pair<std::size_t, int>, std::size_t> col_index;
    for (const auto& r : rows)
        for (const auto& [key, _] : r)
            col_index.emplace(key, 0);
    std::size_t j = 0;
    for (auto& [_, idx] : col_index)
        idx = j++;
    std::size_t n = rows.size(), m = col_index.size();
    auto mod = [&](const Integer& x) {
        Integer r = x % q;
        return r < 0 ? Integer(r + q) : r;
    };
    std::vector<std::vector<Integer>> M(n, std::vector<Integer>(m, Integer(0)));
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& [key, c] : rows[k])
            M[k][col_index[key]] = mod(numerator(c));
    std::vector<std::vector<Integer>> U(n, std::vector<Integer>(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i)
        U[i][i] = 1;

    auto row_op = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t c = 0; c < m; ++c)
            M[dst][c] = mod(M[dst][c] - f * M[src][c]);
        for (std::size_t c = 0; c < n; ++c)
            U[dst][c] = mod(U[dst][c] - f * U[src][c]);
    };
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t r = 0; r < n; ++r)
            M[r][dst] = mod(M[r][dst] - f * M[r][src]);
    };

    std::size_t t = 0;
    for (; t < n && t < m; ++t) {
        // Euclid on row t and column t until only the pivot remains.
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t r = t; r < n; ++r)
                for (std::size_t c = t; c < m; ++c)
                    if (M[r][c] != 0 && (!best || M[r][c] < M[best->first][best->second]))
                        best = {{r, c}};
            if (!best)
                break;
            std::swap(M[t], M[best->first]);
            std::swap(U[t], U[best->first]);
            for (auto& row : M)
                std::swap(row[t], row[best->second]);
            bool clean = true;
            for (std::size_t r = t + 1; r < n; ++r)
                if (M[r][t] != 0) {
                    row_op(r, t, M[r][t] / M[t][t]);
                    clean = clean && M[r][t] == 0;
                }
            for (std::size_t c = t + 1; c < m; ++c)
                if (M[t][c] != 0) {
                    col_op(c, t, M[t][c] / M[t][t]);
                    clean = clean && M[t][c] == 0;
                }
            if (clean)
                break;
        }
        if (M[t][t] == 0)
            break;
    }
    // Row i of U M is d_i e_i (or zero); y_i d_i = 0 mod q picks the kernel.
    for (std::size_t i = n; i-- > 0;) {
        Integer d = i < m ? M[i][i] : Integer(0);
        Integer g = gcd(d, q);
        if (g == 1)
            continue;
        Integer scale = q / g;
        std::vector<Rational> y(n);
        for (std::size_t c = 0; c < n; ++c)
            y[c] = Rational(mod(scale * U[i][c]));
        return y;
    }
    return std::nullopt;
}

/// Nonzero r in R^n whose image in the target kills sum r_k rows[k].
std::optional<std::vector<Rational>> annihilating_vector(const Ring& R, const Ring& T,
                                                         const std::vector<Row>& rows) {
    const Ring& B = T.base();
    std::size_t n = rows.size();
    if (B.kind() == Ring::Kind::Modular) {
        const Integer& q = B.modulus();
        // R -> Z/q has a kernel unless R = Z/q; any r in it kills everything.
        if (!(R.kind() == Ring::Kind::Modular && R.modulus() == q)) {
            std::vector<Rational> y(n, Rational(0));
            y[0] = Rational(q);
            return y;
        }
        return left_kernel_mod(rows, q);
    }
    auto y = left_kernel_Q(rows);
    if (!y || R.kind() == Ring::Kind::Rationals)
        return y;
    // R = Z: clear denominators, then divide out the content.
    Integer l = 1, g = 0;
    for (auto& c : *y)
        l = lcm(l, denominator(c));
    for (auto& c : *y) {
        c *= l;
        g = gcd(g, numerator(c));
    }
    for (auto& c : *y)
        c /= g;
    return y;
}

std::vector<Scalar> condition_a_samples(const Ring& R, const Ring& T, std::size_t samples) {
    std::vector<Scalar> out;
    if (auto all = R.elements()) {
        for (auto& r : *all)
            if (!R.is_zero(r))
                out.push_back(r);
        return out;
    }
    if (T.base().kind() == Ring::Kind::Modular)
        out.push_back(R.from_rational(Rational(T.base().modulus())));
    for (long long i = 1; out.size() < samples; ++i) {
        out.push_back(R.from_int(i));
        out.push_back(R.from_int(-i));
        if (R.kind() == Ring::Kind::Rationals)
            out.push_back(R.from_rational(Rational(i, i + 1)));
    }
    out.resize(std::min(out.size(), samples));
    return out;
}

bool is_graded_system(const CKSystem& sys) {
    const TargetAlgebra& t = sys.target;
    if (!t.ring().is_laurent())
        return false;
    auto degree_ok = [&](const Matrix& m, int want) {
        if (t.is_zero(m))
            return true;
        auto d = t.homogeneous_degree(m);
        return d && *d == want;
    };
    return std::all_of(sys.vertex_images.begin(), sys.vertex_images.end(),
                       [&](const Matrix& m) { return degree_ok(m, 0); }) &&
           std::all_of(sys.edge_images.begin(), sys.edge_images.end(),
                       [&](const Matrix& m) { return degree_ok(m, 1); });
}

} // namespace

UniquenessReport check_conditions(const CKSystem& sys, int degree_bound, std::size_t samples) {
    const Graph& g = *sys.graph;
    const TargetAlgebra& t = sys.target;
    const Ring& R = sys.coeff_ring;
    if (R.is_laurent())
        throw DomainError("coefficient ring must be Z, Z/n or Q, got " + R.name());
    if (degree_bound < 0)
        throw DomainError("degree bound must be nonnegative");
    auto ck = ck_validate(sys);
    if (!ck.valid)
        throw DomainError("not a Cuntz-Krieger system: " + ck.violations.front());

    UniquenessReport out;
    out.condition_L = condition_L(g);
    out.graded = is_graded_system(sys);

    // (a) Phi(r v) != 0.
    auto rs = condition_a_samples(R, t.ring(), samples);
    out.a.exhaustive = R.is_finite();
    out.a.samples = rs.size();
    for (VertexId v = 0; v < g.vertex_count() && out.a.pass; ++v)
        for (const Scalar& r : rs)
            if (t.is_zero(t.scale(sys.embed(r), sys.vertex_images[v]))) {
                out.a.pass = false;
                out.a.witness = {{v, r}};
                break;
            }

    // (b) no Laurent p with support in [-N, N] kills Phi(omega_alpha). Up to
    // the unit Phi(alpha alpha^*), this is a polynomial of degree <= 2N.
    Ring laurent_R = Ring::laurent(R);
    for (const auto& d : distinguished_paths(g, 2)) {
        ConditionB cb;
        cb.alpha = d.alpha;
        cb.bound = degree_bound;
        Matrix sa = path_image(sys, d.alpha);
        Matrix unit = t.mul(sa, t.star(sa));
        Matrix w = t.mul(t.mul(sa, path_image(sys, d.lambda)), t.star(sa));
        std::vector<Row> rows{flatten(t, unit)};
        Matrix power = unit;
        for (int width = 0; width <= 2 * degree_bound; ++width) {
            if (width > 0) {
                power = t.mul(power, w);
                rows.push_back(flatten(t, power));
            }
            auto y = annihilating_vector(R, t.ring(), rows);
            if (!y)
                continue;
            bool negate = R.kind() != Ring::Kind::Modular && y->back() < 0;
            std::vector<std::pair<int, Rational>> terms;
            for (std::size_t k = 0; k < y->size(); ++k)
                terms.emplace_back(static_cast<int>(k), negate ? Rational(-(*y)[k]) : (*y)[k]);
            std::vector<std::pair<int, Rational>> reduced;
            for (auto& [k, c] : terms)
                reduced.emplace_back(k, R.from_rational(c).value);
            cb.pass = false;
            cb.bound = (width + 1) / 2;
            cb.annihilator = laurent_R.make_laurent(std::move(reduced));
            break;
        }
        out.b.push_back(std::move(cb));
    }

    bool b_pass = std::all_of(out.b.begin(), out.b.end(), [](auto& c) { return c.pass; });
    if (!out.a.pass) {
        out.verdict = UniquenessReport::Verdict::NotInjective;
        out.reason = "condition (a) fails: Phi(" + R.format(out.a.witness->second) + "*" +
                     g.vertex_name(out.a.witness->first) + ") = 0";
    } else if (!b_pass) {
        auto& bad = *std::find_if(out.b.begin(), out.b.end(), [](auto& c) { return !c.pass; });
        out.verdict = UniquenessReport::Verdict::NotInjective;
        out.reason = "condition (b) fails at alpha=" + g.format_path(bad.alpha) + ": p(x) = " +
                     laurent_R.format(*bad.annihilator) + " annihilates Phi(omega)";
    } else if ((out.condition_L || out.graded) && out.a.exhaustive) {
        out.verdict = UniquenessReport::Verdict::Injective;
        out.reason = std::string(out.condition_L ? "Condition (L) holds" : "Phi is graded") +
                     " and (a) holds for every r in " + R.name();
    } else {
        out.verdict = UniquenessReport::Verdict::VerifiedAtBound;
        std::vector<std::string> open;
        if (!out.a.exhaustive)
            open.push_back("(a) checked on " + std::to_string(out.a.samples) + " samples of " +
                           R.name());
        if (!out.condition_L && !out.graded)
            open.push_back("(b) checked up to degree " + std::to_string(degree_bound));
        out.reason = open.empty() ? "no violation found" : open.front();
        for (std::size_t i = 1; i < open.size(); ++i)
            out.reason += "; " + open[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cohn path algebras through F(E)

AlgebraPtr cohn_algebra(const AlgebraPtr& alg) {
    return Algebra::create(std::make_shared<const Graph>(build_F(alg->graph())), alg->ring());
}

Element cohn_embed(const Element& x, const AlgebraPtr& f_algebra) {
    const Graph& e_graph = x.graph();
    const Graph& f_graph = f_algebra->graph();
    if (!(x.ring() == f_algebra->ring()))
        throw DomainError("ring mismatch: " + x.ring().name() + " vs " +
                          f_algebra->ring().name());
    auto fv = [&](const std::string& name) {
        auto id = f_graph.find_vertex(name);
        if (!id)
            throw DomainError("target graph is not F(E): missing vertex " + name);
        return *id;
    };
    auto fe = [&](const std::string& name) {
        auto id = f_graph.find_edge(name);
        if (!id)
            throw DomainError("target graph is not F(E): missing edge " + name);
        return *id;
    };
    auto vertex_image = [&](VertexId v) {
        const auto& name = e_graph.vertex_name(v);
        Element out = vertex(f_algebra, fv(name));
        if (e_graph.is_regular(v))
            out += vertex(f_algebra, fv(name + "'"));
        return out;
    };
    auto path_to_F = [&](const Path& p) {
        if (p.is_vertex())
            return vertex_image(p.source());
        Element out = unit(f_algebra);
        for (EdgeId e : p.edges()) {
            const auto& name = e_graph.edge_name(e);
            Element img = edge(f_algebra, fe(name));
            if (e_graph.is_regular(e_graph.range(e)))
                img += edge(f_algebra, fe(name + "'"));
            out = mul(out, img);
        }
        return out;
    };
    Element out = zero(f_algebra);
    for (const auto& [m, c] : x.terms())
        out += mul(path_to_F(m.alpha), star(path_to_F(m.beta))).scaled(c);
    return normal_form(out);
}

UniquenessReport cohn_check(const CKSystem& sys_over_F, int degree_bound, std::size_t samples) {
    return check_conditions(sys_over_F, degree_bound, samples);
}

} // namespace lpa
