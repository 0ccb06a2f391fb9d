#include "lpa/cli.hpp"

#include "lpa/aprep.hpp"
#include "lpa/core.hpp"
#include "lpa/errors.hpp"
#include "lpa/uniqueness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <sstream>

namespace lpa::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Text lines and a JSON object built side by side, so `--json` mirrors the
/// plain report field for field.
class Report {
public:
    explicit Report(std::string verb) { json_["verb"] = std::move(verb); }

    /// A bare result line (`v - f.f*`).
    void value(const std::string& key, const std::string& v) {
        lines_.push_back(v);
        json_[key] = v;
    }
    void field(const std::string& key, const std::string& v) {
        lines_.push_back(key + ": " + v);
        json_[key] = v;
    }
    void field(const std::string& key, const Json& v, const std::string& text) {
        lines_.push_back(key + ": " + text);
        json_[key] = v;
    }
    void list(const std::string& key, const std::vector<std::string>& items) {
        lines_.push_back(key + ":");
        for (const auto& i : items)
            lines_.push_back("  " + i);
        json_[key] = items;
    }
    void raw(const std::string& key, Json v) { json_[key] = std::move(v); }
    void text(const std::string& line) { lines_.push_back(line); }
    void verdict(const std::string& v) {
        lines_.push_back("VERDICT: " + v);
        json_["verdict"] = v;
    }

    void emit(std::ostream& out, bool as_json) const {
        if (as_json) {
            out << json_.dump(2) << '\n';
            return;
        }
        for (const auto& l : lines_)
            out << l << '\n';
    }

private:
    std::vector<std::string> lines_;
    Json json_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GraphPtr load_graph(const std::string& path) {
    try {
        return std::make_shared<const Graph>(parse_graph(read_file(path)));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

CKSystem load_system(const std::string& path, bool over_F) {
    std::filesystem::path p(path);
    try {
        return parse_system(read_file(path), p.parent_path(), over_F);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

struct Options {
    std::string ring = "Z";
    std::optional<std::size_t> max_len;
    int degree_bound = 4;
    std::string special_edges;
    unsigned seed = 1;
    bool json = false;
    bool ring_given = false;
};

AlgebraPtr make_algebra(const GraphPtr& g, const Options& o) {
    Ring r = Ring::parse(o.ring);
    if (o.special_edges.empty())
        return Algebra::create(g, r);
    return Algebra::create(g, r, SpecialEdgeChoice::parse(*g, o.special_edges));
}

Json condition_a_json(const Graph& g, const Ring& r, const ConditionA& a) {
    Json j{{"pass", a.pass}, {"exhaustive", a.exhaustive}, {"samples", a.samples}};
    if (a.witness)
        j["witness"] = {{"vertex", g.vertex_name(a.witness->first)},
                        {"r", r.format(a.witness->second)}};
    return j;
}

void uniqueness_report(Report& rep, const CKSystem& sys, const UniquenessReport& u) {
    const Graph& g = *sys.graph;
    const Ring& r = sys.coeff_ring;
    Ring lr = Ring::laurent(r);
    rep.field("ring", r.name());
    rep.field("target", sys.target.name());
    rep.field("condition-L", u.condition_L ? "yes" : "no");
    rep.field("graded", u.graded ? "yes" : "no");

    std::string a_text = u.a.pass ? "pass" : "fail";
    a_text += u.a.exhaustive ? " (exhaustive over " + r.name() + ")"
                             : " (" + std::to_string(u.a.samples) + " samples of " + r.name() + ")";
    if (u.a.witness)
        a_text += " witness v=" + g.vertex_name(u.a.witness->first) +
                  " r=" + r.format(u.a.witness->second);
    rep.field("condition-a", condition_a_json(g, r, u.a), a_text);

    Json bj = Json::array();
    std::vector<std::string> b_lines;
    for (const auto& b : u.b) {
        Json item{{"alpha", g.format_path(b.alpha)}, {"pass", b.pass}, {"bound", b.bound}};
        std::string line = "alpha=" + g.format_path(b.alpha) + " ";
        if (b.pass) {
            line += "pass at degree " + std::to_string(b.bound);
        } else {
            item["annihilator"] = lr.format(*b.annihilator);
            line += "fail annihilator " + lr.format(*b.annihilator);
        }
        bj.push_back(item);
        b_lines.push_back(line);
    }
    if (u.b.empty())
        b_lines.push_back("no distinguished paths (vacuous)");
    rep.list("condition-b", b_lines);
    rep.raw("condition-b", bj);
    rep.field("reason", u.reason);
    rep.verdict(to_string(u.verdict));
}

/// Parses an expression that must be a single monomial with coefficient 1.
Monomial single_monomial(const AlgebraPtr& alg, const std::string& text) {
    Element x = parse_expr(alg, text);
    if (x.size() != 1 || !alg->ring().is_one(x.terms().begin()->second))
        throw DomainError("expected a single generator alpha.beta*, got '" + text + "'");
    return x.terms().begin()->first;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact computations in Leavitt and Cohn path algebras", "lpa"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--ring", o.ring, "Coefficient ring: Z, Z/n, Q, Laurent(Q)");
    app.add_option("--max-len", o.max_len, "Path length bound for searches and listings");
    app.add_option("--degree-bound", o.degree_bound, "Laurent degree bound for condition (b)");
    app.add_option("--special-edges", o.special_edges, "Special edges, e.g. v=e,u=g");
    app.add_option("--seed", o.seed, "Seed for randomized checks (all verbs are deterministic)");
    app.add_flag("--json", o.json, "Emit a JSON report");

    std::function<void(Report&)> action;
    std::string verb;
    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->callback([&verb, name] { verb = name; });
        return s;
    };

    std::string graph_file, system_file, expr, expr2, vertex_name, vec_text;
    std::size_t depth = 0;
    std::vector<std::string> trail_literals;

    auto* nf = sub("normal-form", "Normal form of an expression");
    nf->add_option("graph", graph_file)->required();
    nf->add_option("expr", expr)->required();

    auto* mulc = sub("mul", "Product of two expressions, in normal form");
    mulc->add_option("graph", graph_file)->required();
    mulc->add_option("x", expr)->required();
    mulc->add_option("y", expr2)->required();

    auto* cls = sub("classify-generator", "Classify a generator alpha.beta*");
    cls->add_option("graph", graph_file)->required();
    cls->add_option("generator", expr)->required();

    auto* cp = sub("core-project", "Conditional expectation onto the commutative core");
    cp->add_option("graph", graph_file)->required();
    cp->add_option("expr", expr)->required();

    auto* wit = sub("witness", "Search a diagonal element not commuting with x");
    wit->add_option("graph", graph_file)->required();
    wit->add_option("expr", expr)->required();

    auto* cc = sub("check-commutative", "Decide commutativity of L_R(E) from the graph shape");
    cc->add_option("graph", graph_file)->required();

    auto* dec = sub("decompose", "Discrete summands of the commutative core");
    dec->add_option("graph", graph_file)->required();

    auto* tr = sub("trails", "Trail listing, existence and classification");
    tr->add_option("graph", graph_file)->required();
    tr->add_option("trail", trail_literals);

    auto* ap = sub("ap-apply", "Apply an element in the essentially aperiodic representation");
    ap->add_option("graph", graph_file)->required();
    ap->add_option("--expr", expr)->required();
    ap->add_option("--vec", vec_text)->required();

    auto* ckv = sub("ck-validate", "Check the Cuntz-Krieger relations of a system");
    ckv->add_option("system", system_file)->required();

    auto* hom = sub("hom-apply", "Evaluate the induced homomorphism");
    hom->add_option("system", system_file)->required();
    hom->add_option("expr", expr)->required();

    auto* red = sub("reduce", "Search a reduction certificate mu* a nu");
    red->add_option("graph", graph_file)->required();
    red->add_option("expr", expr)->required();

    auto* uq = sub("uniqueness", "Check the uniqueness conditions for a system");
    uq->add_option("system", system_file)->required();

    auto* cohn = sub("cohn-check", "Uniqueness conditions for a Cohn system given over F(E)");
    cohn->add_option("system", system_file)->required();

    auto* ev = sub("expand-vertex", "Path expansion of a vertex at depth k");
    ev->add_option("graph", graph_file)->required();
    ev->add_option("vertex", vertex_name)->required();
    ev->add_option("k", depth)->required();

    if (!args.empty() && !args.front().starts_with("-") &&
        !app.get_subcommand_no_throw(args.front())) {
        err << "usage error: unknown verb '" << args.front() << "'\n" << app.help();
        return 2;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    o.ring_given = app.get_option("--ring")->count() > 0;

    Report rep(verb);
    try {
        if (verb == "normal-form") {
            auto alg = make_algebra(load_graph(graph_file), o);
            rep.value("normal_form", format(normal_form(parse_expr(alg, expr))));
        } else if (verb == "mul") {
            auto alg = make_algebra(load_graph(graph_file), o);
            rep.value("product",
                      format(normal_form(mul(parse_expr(alg, expr), parse_expr(alg, expr2)))));
        } else if (verb == "classify-generator") {
            auto alg = make_algebra(load_graph(graph_file), o);
            Monomial m = single_monomial(alg, expr);
            rep.field("generator", format_monomial(alg->graph(), m));
            rep.verdict(to_string(classify_generator(alg->graph(), m)));
        } else if (verb == "core-project") {
            auto alg = make_algebra(load_graph(graph_file), o);
            Element x = parse_expr(alg, expr);
            rep.field("normal_form", format(normal_form(x)));
            rep.field("core_projection", format(core_project(x)));
            rep.verdict(in_core(x) ? "in-core" : "not-in-core");
        } else if (verb == "witness") {
            auto alg = make_algebra(load_graph(graph_file), o);
            std::size_t len = o.max_len.value_or(4);
            auto w = diagonal_commutant_witness(parse_expr(alg, expr), len);
            rep.field("max_len", Json(len), std::to_string(len));
            if (w.alpha)
                rep.field("alpha", alg->graph().format_path(*w.alpha));
            rep.verdict(to_string(w.status));
        } else if (verb == "check-commutative") {
            auto g = load_graph(graph_file);
            auto shape = shape_classify(*g);
            if (shape.commutative) {
                std::vector<std::string> comps;
                for (auto& c : shape.components)
                    comps.push_back(c.loop ? "isolated-loop " + g->vertex_name(c.vertex) + " " +
                                                 g->edge_name(*c.loop)
                                           : "isolated-vertex " + g->vertex_name(c.vertex));
                rep.list("components", comps);
                rep.verdict("commutative");
            } else {
                rep.field("witness", shape.witness);
                rep.verdict("non-commutative");
            }
        } else if (verb == "decompose") {
            auto g = load_graph(graph_file);
            std::size_t len = o.max_len.value_or(3);
            auto d = disc_decomposition(*g, len);
            std::vector<std::string> fin, inf;
            for (auto& t : d.finite)
                fin.push_back(format_trail(*g, t));
            for (auto& t : d.infinite)
                inf.push_back(format_trail(*g, t));
            rep.list("R", fin);
            rep.list("R[x,x^-1]", inf);
            rep.field("summary", std::to_string(fin.size()) + " x R + " +
                                     std::to_string(inf.size()) + " x R[x,x^-1]");
            rep.verdict(d.complete ? "complete" : "discrete-part-only");
        } else if (verb == "trails") {
            auto g = load_graph(graph_file);
            std::size_t len = o.max_len.value_or(3);
            if (trail_literals.empty()) {
                std::vector<std::string> disc, found;
                for (auto& t : enumerate_discrete(*g, len))
                    disc.push_back(format_trail(*g, t));
                for (VertexId v = 0; v < g->vertex_count(); ++v) {
                    Trail t = find_trail_from(g, v);
                    found.push_back(g->vertex_name(v) + ": " + format_trail(*g, t) + " (" +
                                    to_string(classify(*g, t)) + ")");
                }
                rep.list("discrete", disc);
                rep.list("from-vertex", found);
            } else {
                Json arr = Json::array();
                for (auto& lit : trail_literals) {
                    Trail t = parse_trail(g, lit);
                    auto c = classify(*g, t);
                    Json j{{"trail", format_trail(*g, t)},
                           {"class", to_string(c)},
                           {"head", g->format_path(head(*g, t, len))}};
                    rep.text(format_trail(*g, t) + ": " + to_string(c));
                    rep.text("  head(" + std::to_string(len) + ") = " +
                             g->format_path(head(*g, t, len)));
                    if (t.is_periodic()) {
                        auto s = seed(t);
                        j["seed"] = {g->format_path(s.alpha), g->format_path(s.lambda)};
                        rep.text("  seed = (" + g->format_path(s.alpha) + ", " +
                                 g->format_path(s.lambda) + ")");
                    }
                    if (c == TrailClass::Finite || c == TrailClass::DiscretePeriodic) {
                        j["essential_head"] = g->format_path(essential_head(*g, t));
                        rep.text("  essential head = " + g->format_path(essential_head(*g, t)));
                    }
                    arr.push_back(j);
                }
                rep.raw("trails", arr);
            }
        } else if (verb == "ap-apply") {
            auto alg = make_algebra(load_graph(graph_file), o);
            Element x = parse_expr(alg, expr);
            ModuleVector m = parse_vector(alg, vec_text);
            rep.field("pi_ap", format_vector(pi_ap(x, m)));
            rep.field("e_ap", format_vector(e_ap(x, m)));
            rep.verdict(check_em_square(x, m) ? "square-commutes" : "square-fails");
        } else if (verb == "ck-validate" || verb == "hom-apply" || verb == "uniqueness" ||
                   verb == "cohn-check") {
            CKSystem sys = load_system(system_file, verb == "cohn-check");
            if (o.ring_given)
                set_coeff_ring(sys, Ring::parse(o.ring));
            if (verb == "ck-validate") {
                auto report = ck_validate(sys);
                rep.list("violations", report.violations);
                rep.verdict(report.valid ? "valid" : "invalid");
            } else if (verb == "hom-apply") {
                auto alg = sys.algebra();
                Element x = parse_expr(alg, expr);
                rep.value("image", sys.target.format(hom_apply(sys, x)));
            } else if (verb == "uniqueness") {
                uniqueness_report(rep, sys, check_conditions(sys, o.degree_bound));
            } else {
                uniqueness_report(rep, sys, cohn_check(sys, o.degree_bound));
            }
        } else if (verb == "reduce") {
            auto alg = make_algebra(load_graph(graph_file), o);
            Element a = parse_expr(alg, expr);
            std::size_t bound = o.max_len.value_or(6);
            auto cert = reduce_search(a, bound);
            if (!cert) {
                rep.field("path_bound", Json(bound), std::to_string(bound));
                rep.verdict("inconclusive");
            } else {
                rep.field("certificate", format_certificate(alg->graph(), alg->ring(), *cert));
                rep.field("outcome", format(certificate_outcome(alg, *cert)));
                rep.field("replay", replay(*cert, a) ? "ok" : "MISMATCH");
                rep.verdict(cert->kind == ReductionCertificate::Kind::ScalarVertex
                                ? "scalar-vertex"
                                : "cycle-polynomial");
            }
        } else if (verb == "expand-vertex") {
            auto alg = make_algebra(load_graph(graph_file), o);
            auto v = alg->graph().find_vertex(vertex_name);
            if (!v)
                throw ParseError("unknown vertex '" + vertex_name + "'");
            Element x = expand_vertex(alg, *v, depth);
            rep.value("expansion", format(x));
            rep.verdict(eq(x, vertex(alg, *v)) ? "equals-vertex" : "differs");
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const UndecidedError& e) {
        err << "undecided: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    rep.emit(out, o.json);
    return 0;
}

} // namespace lpa::cli
